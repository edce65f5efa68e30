use thiserror::Error;

/// Errors raised by every engine in the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A variable, term or atom does not belong to the system it is used with.
    #[error("domain error: {0}")]
    Domain(String),
    /// More variables than the dense atom encoding supports.
    #[error("system too large: {0}")]
    Oversize(String),
    /// Malformed linear system (row length or bound count mismatch).
    #[error("structural error: {0}")]
    Structure(String),
    /// A value lies outside its admissible range.
    #[error("out of range: {0}")]
    OutOfRange(String),
    /// Input is well formed but the requested operation does not apply to it.
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("io error: {0}")]
    Io(String),
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

pub type Result<T, E = Error> = std::result::Result<T, E>;
