use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{what} exceeds the limit of {limit}")]
    Guard { what: &'static str, limit: u64 },

    #[error("state {0} has zero probability under the target distribution")]
    ZeroSupport(String),

    #[error("state {0} is not an independent set")]
    NotIndependent(String),

    #[error("sample list is empty")]
    EmptySamples,

    #[error("state {0} is outside the distribution's universe")]
    UniverseMismatch(String),

    #[error("did not reach the requested distance within {0} steps")]
    NotConverged(u64),

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } => 2,
            Error::Guard { .. } => 3,
            _ => 4,
        }
    }
}
