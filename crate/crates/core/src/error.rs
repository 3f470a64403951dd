use thiserror::Error;

/// Broad failure class, used by the CLI to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad input values: out-of-range parameters, failed preconditions.
    Domain,
    /// Text that could not be parsed.
    Parse,
    /// An internal invariant did not hold. Always a bug.
    Internal,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("denominator bound {bound} exhausted without reaching the target")]
    BoundExhausted { bound: u64 },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::ZeroDenominator
            | Error::Domain(_)
            | Error::Validation(_)
            | Error::BoundExhausted { .. } => ErrorKind::Domain,
            Error::Parse { .. } => ErrorKind::Parse,
            Error::Invariant(_) => ErrorKind::Internal,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
