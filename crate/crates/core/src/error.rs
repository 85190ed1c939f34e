use thiserror::Error;

/// Failures raised by the model and the subspace/criteria machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degree {degree} exceeds the configured cap {cap}")]
    CapExceeded { degree: usize, cap: usize },

    #[error("polynomial is not symmetric: antidiagonal spread {spread:e}")]
    NotSymmetric { spread: f64 },

    #[error("all input vectors are below the rank tolerance")]
    EmptySpan,

    #[error("input vectors are linearly dependent: rank {rank} of {count}")]
    RankDeficient { rank: usize, count: usize },

    #[error("premise violated: {check} ({detail})")]
    PremiseViolated { check: String, detail: String },

    #[error("frame ranks differ: source {source_rank}, target {target_rank}")]
    RankMismatch {
        source_rank: usize,
        target_rank: usize,
    },

    #[error("containment chain broken: {outer} does not contain {inner} (residual {residual:e})")]
    ChainBroken {
        outer: String,
        inner: String,
        residual: f64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn premise(check: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::PremiseViolated {
            check: check.into(),
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
