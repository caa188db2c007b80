use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("graph generation did not yield a connected graph after {retries} retries")]
    Disconnected { retries: u32 },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("mode index error: {0}")]
    ModeIndex(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: String, actual: String },

    #[error("matrix is not symmetric (relative asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("matrix is not symplectic (residual {0:e})")]
    NotSymplectic(f64),

    #[error("unphysical covariance matrix: symplectic eigenvalue {0} < 1")]
    Unphysical(f64),

    #[error("invalid squeezing: {0}")]
    InvalidSqueezing(String),

    #[error("decomposition failed: {0}")]
    Decomposition(String),

    #[error("precondition unmet: {0}")]
    Precondition(String),

    #[error("optimizer diverged at generation {generation}: {reason}")]
    Divergence { generation: usize, reason: String },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
