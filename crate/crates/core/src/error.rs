use thiserror::Error;

use crate::lattice::Structure;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cover relation contains a cycle through `{0}`")]
    CycleDetected(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("edge {upper} -> {lower} is not a cover (implied by other edges)")]
    NonCoverEdge { upper: String, lower: String },
    #[error("operation requires a verified {0}")]
    StructureNotVerified(Structure),
    #[error("join of `{0}` and `{1}` is undefined (no common upper bound)")]
    JoinUndefined(String, String),
    #[error("meet of `{0}` and `{1}` is undefined (no common lower bound)")]
    MeetUndefined(String, String),
    #[error("size {size} exceeds the configured cap {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("vector belongs to a different lattice")]
    LatticeMismatch,
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("sampling support is empty")]
    EmptySupport,
    #[error("no value for element `{0}`")]
    MissingValue(String),
    #[error("no label for object `{0}`")]
    MissingLabel(String),
    #[error("value out of bounds: {0}")]
    OutOfBounds(String),
    #[error("Moebius value overflowed i64")]
    MoebiusOverflow,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
