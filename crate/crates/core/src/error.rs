use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("matrix is not positive definite (smallest eigenvalue {0:e})")]
    NotPositiveDefinite(f64),
    #[error("matrix is singular or numerically singular")]
    Singular,
    #[error("vector is zero")]
    ZeroVector,
    #[error("torus representations only accept diagonal matrices")]
    NonDiagonal,
    #[error("empty weight set")]
    EmptyWeights,
    #[error("{count} distinct weights exceed the enumeration cap of {cap}")]
    TooManyWeights { count: usize, cap: usize },
    #[error("vector is semistable for the torus; no stratum label")]
    Semistable,
    #[error("zero label has no stratum")]
    ZeroLabel,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("bracket is not a critical point (residual {0:e}); run the gradient flow first")]
    NotCritical(f64),
    #[error("flow failed: {0}")]
    Flow(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
