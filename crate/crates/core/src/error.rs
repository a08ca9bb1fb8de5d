use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("word is not {q}-bounded (a symbol occurs {max_count} times)")]
    NotQBounded { q: usize, max_count: usize },

    #[error("search space too large for exhaustive mode: {0}")]
    CapExceeded(String),

    #[error("alphabet size {actual} is below the required threshold {required}")]
    BelowThreshold { required: usize, actual: usize },

    #[error("message length {l} does not meet the attack threshold; need l >= {required}")]
    LengthBelowThreshold { l: usize, required: usize },

    #[error("no certificate found: {0}")]
    NotFound(String),

    /// A construction the underlying theorem guarantees has failed. This is
    /// a defect in the implementation, never an ordinary outcome.
    #[error("guaranteed construction failed: {0}")]
    GuaranteeViolated(String),

    #[error("bit width mismatch: {0}")]
    WidthMismatch(String),

    #[error("block sampler exhausted after {0} blocks")]
    SamplerExhausted(u64),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
