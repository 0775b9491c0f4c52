use thiserror::Error;

use crate::graph::Vertex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong in the pipeline.
///
/// The variants map onto the CLI exit codes: input-style errors exit with 2,
/// [`Error::Invariant`] exits with 3.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown vertex {0}")]
    UnknownVertex(Vertex),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("capacity exceeded: {what} is {actual}, limit is {limit}")]
    Capacity { what: &'static str, actual: usize, limit: usize },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    /// A replacement was requested for a part whose class is not covered by
    /// the representative table. Callers leave the part untouched.
    #[error("representation incomplete: {0}")]
    Incomplete(String),
    /// A replacement would be sound but does not shrink the graph or would
    /// raise the parameter.
    #[error("replacement refused: {0}")]
    Refused(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    /// True for errors a reducer answers by leaving its input unreduced.
    pub fn is_refusal(&self) -> bool {
        matches!(self, Error::Incomplete(_) | Error::Refused(_) | Error::Capacity { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
