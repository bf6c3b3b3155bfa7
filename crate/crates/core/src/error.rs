use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The prime sieve would have to grow past its configured ceiling.
    #[error("insufficient sieve capacity: {needed} exceeds ceiling {ceiling}")]
    SieveCapacity { needed: u64, ceiling: u64 },

    #[error("oracle refused: {0}")]
    OracleCap(String),

    /// Requested tolerance is below what the working precision can certify.
    #[error("tolerance too small for working precision of {bits} bits")]
    PrecisionRefused { bits: u32 },

    #[error("materialization refused: {count} prime indices exceed cap {cap}")]
    MaterializeCap { count: u64, cap: u64 },

    #[error("certification failed: {0}")]
    Certification(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
