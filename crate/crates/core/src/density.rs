//! Exhaustive checks of the local-density hypotheses.
//!
//! Integer conventions, fixed once for the whole crate:
//! * "`|S| ≥ ζn`" means `|S| ≥ ceil(ζ·n)`;
//! * "`|C| < ζn`" means `|C| ≤ ceil(ζ·n) − 1`;
//! * a degree threshold derived from a density is rounded up.
//!
//! All comparisons against `d` are done in exact integer arithmetic.

use std::fmt;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::counting::SparseSets;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::limits::{ScaleLimits, WORD_LIMIT};
use crate::ratio::{ceil_div, parse_ratio, ratio_string};

/// `(ζ, d)` with `0 < ζ ≤ 1` and `0 < d < 1`, held as exact ratios.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct DensityParams {
    zeta: Ratio<u64>,
    d: Ratio<u64>,
}

impl DensityParams {
    pub fn new(zeta: Ratio<u64>, d: Ratio<u64>) -> Result<Self> {
        let zero = Ratio::from_integer(0);
        let one = Ratio::from_integer(1);
        if !(zeta > zero && zeta <= one) {
            return Err(Error::InvalidParameter(format!(
                "zeta must lie in (0, 1], got {}",
                ratio_string(zeta)
            )));
        }
        if !(d > zero && d < one) {
            return Err(Error::InvalidParameter(format!(
                "d must lie in (0, 1), got {}",
                ratio_string(d)
            )));
        }
        Ok(DensityParams { zeta, d })
    }

    pub fn parse(zeta: &str, d: &str) -> Result<Self> {
        Self::new(parse_ratio(zeta)?, parse_ratio(d)?)
    }

    pub fn zeta(&self) -> Ratio<u64> {
        self.zeta
    }

    pub fn d(&self) -> Ratio<u64> {
        self.d
    }

    /// `ceil(ζ·n)`, never below 1 for `n ≥ 1`.
    pub fn size_threshold(&self, n: usize) -> usize {
        let t = ceil_div(*self.zeta.numer() as u128 * n as u128, *self.zeta.denom() as u128);
        (t as usize).max(usize::from(n > 0))
    }

    /// `floor(ζ·n)`, the literal reading reported next to the ceiling one.
    pub fn literal_size(&self, n: usize) -> usize {
        (*self.zeta.numer() as u128 * n as u128 / *self.zeta.denom() as u128) as usize
    }

    /// True when `ζ·n < 1`: the container bound `|C| < ζn` forces an empty container.
    pub fn is_degenerate(&self, n: usize) -> bool {
        (*self.zeta.numer() as u128) * (n as u128) < *self.zeta.denom() as u128
    }

    /// `ceil(c·d/2)`: the degree threshold a set of size `c` inherits.
    pub fn delta_for(&self, c: usize) -> usize {
        ceil_div(c as u128 * *self.d.numer() as u128, 2 * *self.d.denom() as u128) as usize
    }

    /// `ceil(4D/d)`: fingerprint vertices spent per halving round.
    pub fn step_budget(&self, bound: usize) -> usize {
        ceil_div(4 * bound as u128 * *self.d.denom() as u128, *self.d.numer() as u128) as usize
    }

    /// `ceil(log2(1/ζ))`: the number of halving rounds.
    pub fn round_budget(&self) -> usize {
        let (num, den) = (*self.zeta.numer() as u128, *self.zeta.denom() as u128);
        let mut j = 0;
        while (num << j) < den {
            j += 1;
        }
        j
    }

    /// Fingerprint size `ceil(4D/d)·ceil(log2(1/ζ))`.
    pub fn f_target(&self, bound: usize) -> usize {
        self.step_budget(bound) * self.round_budget()
    }

    /// The real-valued `(4D/d)·log2(1/ζ)`, for reports only.
    pub fn f_real(&self, bound: usize) -> f64 {
        let d = *self.d.numer() as f64 / *self.d.denom() as f64;
        let zeta = *self.zeta.numer() as f64 / *self.zeta.denom() as f64;
        4.0 * bound as f64 / d * (1.0 / zeta).log2()
    }

    /// Whether a set of `size` vertices spanning `edges` edges falls below
    /// `d·size²/2`.
    #[inline]
    pub fn is_too_sparse(&self, edges: usize, size: usize) -> bool {
        (2 * edges as u128 * *self.d.denom() as u128) < (*self.d.numer() as u128 * (size * size) as u128)
    }
}

impl fmt::Debug for DensityParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(zeta={}, d={})", ratio_string(self.zeta), ratio_string(self.d))
    }
}

impl Serialize for DensityParams {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("DensityParams", 2)?;
        st.serialize_field("zeta", &ratio_string(self.zeta))?;
        st.serialize_field("d", &ratio_string(self.d))?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensityVerdict {
    pub holds: bool,
    /// The first violating set in (size, lexicographic) order.
    pub witness: Option<VertexSet>,
}

impl DensityVerdict {
    fn from_witness(witness: Option<VertexSet>) -> Self {
        DensityVerdict {
            holds: witness.is_none(),
            witness,
        }
    }
}

fn check_scale(n: usize, limits: &ScaleLimits) -> Result<()> {
    let limit = limits.exhaustive_max_n.min(WORD_LIMIT);
    if n > limit {
        return Err(Error::ScaleLimit {
            what: "exhaustive subset scan",
            requested: format!("n = {n}"),
            limit: format!("n <= {limit}"),
        });
    }
    Ok(())
}

/// Finds the first set, ordered by size then lexicographically, among sizes
/// `min_size..=n` for which `is_light(edges, size)` holds.
///
/// `is_light` must be antitone in `edges` (adding edges never makes a set
/// light again); partial sets that are already heavy are pruned.
pub(crate) fn first_light_set(
    rows: &[u64],
    min_size: usize,
    is_light: &dyn Fn(usize, usize) -> bool,
) -> Option<u64> {
    fn search(
        rows: &[u64],
        size: usize,
        is_light: &dyn Fn(usize, usize) -> bool,
        start: usize,
        mask: u64,
        depth: usize,
        edges: usize,
    ) -> Option<u64> {
        if !is_light(edges, size) {
            return None;
        }
        if depth == size {
            return Some(mask);
        }
        let n = rows.len();
        for v in start..=(n - (size - depth)) {
            let e = edges + (rows[v] & mask).count_ones() as usize;
            if let Some(found) = search(rows, size, is_light, v + 1, mask | 1u64 << v, depth + 1, e) {
                return Some(found);
            }
        }
        None
    }
    (min_size..=rows.len()).find_map(|size| search(rows, size, is_light, 0, 0, 0, 0))
}

/// Decides `(ζ, d)`-density by checking every `S` with `|S| ≥ ceil(ζn)`.
///
/// Density is not monotone in `|S|`, so every size is scanned; within a size
/// a partial set that already carries enough edges is pruned.
pub fn is_locally_dense_exact(
    g: &Graph,
    p: &DensityParams,
    limits: &ScaleLimits,
) -> Result<DensityVerdict> {
    let n = g.n();
    check_scale(n, limits)?;
    let rows = g.small_rows().expect("scale check bounds n by 64");
    let min_size = p.size_threshold(n);
    let witness = first_light_set(&rows, min_size, &|e, m| p.is_too_sparse(e, m));
    Ok(DensityVerdict::from_witness(
        witness.map(|mask| VertexSet::from_mask(n, mask)),
    ))
}

/// Decides whether every `S` with `|S| ≥ k` has `Δ(G[S]) ≥ delta`.
///
/// `Δ(G[·])` is monotone under inclusion, so sets of size exactly `k` are
/// the only ones that need checking: a superset of a set reaching `delta`
/// reaches it too.
pub fn min_degree_threshold_check(
    g: &Graph,
    k: usize,
    delta: usize,
    limits: &ScaleLimits,
) -> Result<DensityVerdict> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let n = g.n();
    if k > n || delta == 0 {
        return Ok(DensityVerdict::from_witness(None));
    }
    check_scale(n, limits)?;
    let witness = SparseSets::new(g, None, k, delta).next();
    Ok(DensityVerdict::from_witness(witness))
}

/// The degree threshold `ceil(c_size·d/2)` that any set of at least
/// `k ≥ c_size/2` vertices inside a `c_size`-set reaches under local density:
/// average degree at least `d·|S|` gives `Δ(G[S]) ≥ d·k ≥ d·c_size/2`.
pub fn density_implies_degree(c_size: usize, d: Ratio<u64>, k: usize) -> Result<usize> {
    if 2 * k < c_size {
        return Err(Error::InvalidParameter(format!(
            "k = {k} is below c_size/2 = {c_size}/2"
        )));
    }
    Ok(ceil_div(c_size as u128 * *d.numer() as u128, 2 * *d.denom() as u128) as usize)
}
