use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("ambient mismatch: expected {expected} variables, found {found}")]
    AmbientMismatch { expected: usize, found: usize },

    /// The operation is not defined for the unit ideal (S/I = 0).
    #[error("undefined for the unit ideal")]
    UnitIdeal,

    #[error("undefined for the zero ideal")]
    ZeroIdeal,

    #[error("exponent overflow")]
    Overflow,

    /// A generator shares a variable with the monomial that should split off.
    #[error("generator {generator} shares support with {monomial}")]
    NotSplit { generator: String, monomial: String },

    #[error("{0} is not regular on the quotient")]
    NotRegular(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("search timed out")]
    Timeout,

    /// A constructed object failed its own post-condition. Always a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
