use thiserror::Error;

/// Errors raised by the library.
///
/// The CLI maps `Domain` and `Precondition` to exit code 2 and
/// `NonConvergence` to exit code 3.
#[derive(Debug, Error)]
pub enum HgError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("numerical non-convergence: {0}")]
    NonConvergence(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, HgError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(HgError::Domain(msg.into()))
}

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(HgError::Precondition(msg.into()))
}
