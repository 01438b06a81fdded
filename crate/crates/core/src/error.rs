use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} exceeds the configured maximum index {max}")]
    IndexOutOfRange { index: u64, max: u64 },

    /// An enclosure left the representable exponent range or could not be
    /// resolved at the working precision.
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("invalid sequence spec: {0}")]
    InvalidSpec(String),

    #[error("enumeration refused: n = {n} exceeds the cap {cap}")]
    DepthRefused { n: u64, cap: u64 },

    #[error("{value} is not an exact {p}-th power of a positive rational")]
    NotExactPower { value: String, p: u32 },

    #[error("log-convexity of M' is not confirmed on 1..{0}")]
    ConvexityUnconfirmed(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
