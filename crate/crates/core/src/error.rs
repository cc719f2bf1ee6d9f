use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Caller supplied parameters outside the documented domain.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// A computation ran out of its work budget before it could decide.
    #[error("budget exhausted: {0}")]
    Budget(String),

    /// Two independent routes disagreed, or a proven identity failed.
    /// Always a bug.
    #[error("invariant violation: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
