//! Counting sparse induced subgraphs of locally dense graphs with
//! fingerprint containers, checked against brute-force enumeration.

pub mod calculators;
pub mod cli;
pub mod container;
pub mod counting;
pub mod density;
pub mod error;
pub mod generators;
pub mod graph;
pub mod limits;
pub mod ratio;
pub mod sparsifier;
pub mod suites;

pub use container::{container_step, fingerprint, rebuild_fingerprint, rebuild_step};
pub use counting::{count_sparse_sets, enumerate_sparse_sets, verify_count_bound, SparsityQuery};
pub use density::{is_locally_dense_exact, min_degree_threshold_check, DensityParams};
pub use error::{Error, Result};
pub use graph::{Graph, VertexSet};
pub use limits::ScaleLimits;
