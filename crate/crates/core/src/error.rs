use thiserror::Error;

/// Errors raised by `turan-core`.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A domain, zero set or other input violates a construction invariant.
    #[error("invalid input: {0}")]
    Invalid(String),
    /// An argument lies outside the domain of the operation (negative
    /// distances, degree zero, ...).
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    /// A logarithmic derivative was requested too close to a zero.
    #[error("evaluation point {re}+{im}i lies within {guard:e} of a zero")]
    Pole { re: f64, im: f64, guard: f64 },
    /// A documented precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Input document could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
