use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unexpected end of input: {0}")]
    Truncated(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("column index {index} out of range 1..={n}")]
    IndexOutOfRange { index: i64, n: usize },

    #[error("negative cost {cost} for column {column}")]
    NegativeCost { column: usize, cost: i64 },

    #[error("malformed header: {0}")]
    MalformedHeader(String),

    #[error("unsupported version {0}")]
    UnsupportedVersion(String),

    #[error("checksum mismatch: file says {expected}, content hashes to {actual}")]
    ChecksumMismatch { expected: String, actual: String },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("cannot fix variable {var} to {value}: only 0 or 1 allowed")]
    InvalidFixing { var: usize, value: f64 },

    #[error("instance has {n} columns; enumeration is limited to {max}")]
    TooLarge { n: usize, max: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
