use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("block length {0} is not a power of two")]
    InvalidBlockLength(usize),

    #[error("information bit count {k} out of range 1..={n}")]
    InfoCountOutOfRange { k: usize, n: usize },

    #[error("initial Bhattacharyya parameter {0} not in (0, 1)")]
    InvalidZ0(f64),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("invalid list size {0}: must be a power of two")]
    InvalidListSize(usize),

    #[error("list size {0} must be even for a reduced crossbar")]
    OddListSize(usize),

    #[error("malformed candidate set: {0}")]
    MalformedCandidates(String),

    /// Destination slot `slot` would need to copy from `from`, which is not
    /// wired to its multiplexer.
    #[error("routing violation: slot {slot} cannot receive from path {from}")]
    RoutingViolation { slot: usize, from: usize },

    #[error("invalid network width {0}")]
    InvalidWidth(usize),

    #[error("unknown sorter design {0}")]
    UnknownDesign(u8),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
