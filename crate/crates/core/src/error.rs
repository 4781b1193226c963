use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed game, profile, certificate or parameter.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The request is well formed but outside what the solver supports.
    #[error("unsupported: {0}")]
    Capability(String),

    /// A numerical routine could not meet its declared tolerance.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A built-in fixture failed its own self-check.
    #[error("fixture corruption: {0}")]
    FixtureCorruption(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
