use thiserror::Error;

use crate::design::DesignReport;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum GbbError {
    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("value out of domain: {0}")]
    Domain(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("arm set is rank deficient: rank {rank} < dimension {dim}")]
    RankDeficient { rank: usize, dim: usize },

    #[error("matrix is singular or not positive definite")]
    Singular,

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("design solver did not reach the certificate after {} iterations (objective {})", .0.iterations, .0.objective)]
    Convergence(Box<DesignReport>),

    #[error("instance too large for exhaustive search: {0} joint arms")]
    TooLarge(u128),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, GbbError>;
