use thiserror::Error;

/// Errors produced across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("ideals belong to different fields")]
    FieldMismatch,

    #[error("prime {p} ramifies in the cyclotomic family (m = {m}); ramified primes cannot be used")]
    RamifiedUnsupported { p: u64, m: u64 },

    #[error("invalid design: {0}")]
    InvalidDesign(String),

    #[error("constellation of {size} points exceeds the enumeration cap of {cap}")]
    TooLarge { size: u128, cap: u64 },

    #[error("minimum distance undefined: the sub-constellation has a single point")]
    UndefinedDistance,

    #[error("side-information set must be nonempty")]
    EmptySideInfo,

    #[error("side-information index {0} out of range")]
    IndexOutOfRange(usize),

    #[error("gain bounds unavailable for mixed signature ({r1}, {r2})")]
    BoundsUnavailable { r1: usize, r2: usize },

    #[error("target SER {0:e} is not bracketed by the curve")]
    NotBracketed(f64),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("corrupt code file: {0}")]
    CorruptFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
