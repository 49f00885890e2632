use thiserror::Error;

/// Errors raised by state construction, transformations and tests.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A computation hit a singular or numerically degenerate matrix.
    #[error("numerical degeneracy: {0}")]
    Degenerate(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A covariance matrix fails the uncertainty relation or symmetry check.
    #[error("unphysical state: {0}")]
    Unphysical(String),

    #[error("malformed state document: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
