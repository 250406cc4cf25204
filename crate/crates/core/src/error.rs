use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An exhaustive routine was asked to work above its configured scale.
    #[error("scale limit exceeded for {what}: requested {requested}, limit {limit}")]
    ScaleLimit {
        what: &'static str,
        requested: String,
        limit: String,
    },

    #[error("size precondition failed: need at least {needed} vertices, have {have}")]
    TooSmall { needed: usize, have: usize },

    #[error("sparsity precondition failed: induced maximum degree {max_degree} is not below {bound}")]
    NotSparse { max_degree: usize, bound: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("infeasible parameter regime: {constraint}")]
    Infeasible { constraint: String },

    #[error("structural error: {0}")]
    Structural(String),
}

impl Error {
    /// Refusals are well-formed requests the library declines to answer
    /// (scale, preconditions, infeasible parameters) as opposed to bad input.
    pub fn is_refusal(&self) -> bool {
        matches!(
            self,
            Error::ScaleLimit { .. }
                | Error::TooSmall { .. }
                | Error::NotSparse { .. }
                | Error::Precondition(_)
                | Error::Infeasible { .. }
        )
    }
}
