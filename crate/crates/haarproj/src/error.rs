//! Error type shared across the crate.

use thiserror::Error;

/// Errors reported by sampling, analytic evaluation and estimation routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A dimension constraint (N, K, R ranges) was violated.
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    /// A scalar argument is outside the domain of a special function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Mixture weights are negative or do not sum to one.
    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    /// Evaluation requested exactly on a non-removable singularity.
    #[error("singularity: {0}")]
    Singularity(String),

    /// Evaluation requested too close to the line t1 + t2 = 1.
    #[error("near-singularity: {0}")]
    NearSingularity(String),

    /// Orthogonal residue evaluation needs K odd and N even.
    #[error("unsupported parity: {0}")]
    UnsupportedParity(String),

    /// No analytic route exists for the requested (ensemble, N, K).
    #[error("unsupported dimensions: {0}")]
    UnsupportedDimension(String),

    /// Histogram request would exceed the bin-count memory guard.
    #[error("too many bins: {0}")]
    TooManyBins(String),

    /// A comparison was attempted against an empty histogram.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// Numerical evaluation failed to reach its target accuracy.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Output file could not be written.
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code for the CLI: 2 for usage/validation problems,
    /// 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Singularity(_) | Error::NearSingularity(_) | Error::Numerical(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
