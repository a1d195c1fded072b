use thiserror::Error;

use crate::board::EdgeRef;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimensions: n={n}, s={s}")]
    InvalidDimensions { n: usize, s: usize },
    #[error("edge {0} is already claimed")]
    AlreadyClaimed(EdgeRef),
    #[error("edge {0} is not on the board")]
    InvalidEdge(EdgeRef),
    #[error("bound too large: {value} exceeds cap {cap}")]
    BoundTooLarge { value: usize, cap: usize },
    #[error("instance too large: {what} ({value} > {cap})")]
    TooLarge {
        what: &'static str,
        value: usize,
        cap: usize,
    },
    #[error("corrupt transcript: {0}")]
    CorruptTranscript(String),
    #[error("no free element")]
    NoFreeElement,
    #[error("no active box")]
    NoActiveBox,
    #[error("hyperedge {edge} would exceed size cap {cap}")]
    GrowthOverflow { edge: usize, cap: usize },
    #[error("illegal claim: {0}")]
    IllegalClaim(String),
    #[error("vertex {0} has no eligible edge")]
    Stuck(usize),
    #[error("no Maker-untouched pair of vertices left")]
    NoUntouchedPair,
    #[error("clique exhausted")]
    CliqueExhausted,
    #[error("pairing broken: {0}")]
    PairingBroken(String),
    #[error("rainbow path extraction failed: {0}")]
    ExtractionFailed(String),
    #[error("unknown game: {0}")]
    UnknownGame(String),
    #[error("unknown strategy: {0}")]
    UnknownStrategy(String),
    #[error("no threshold bias up to b_max={0}")]
    NotFound(usize),
    #[error("bias monotonicity violated at b={0}")]
    NonMonotone(usize),
    #[error("non-monotone data: {0}")]
    NonMonotoneData(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
