use thiserror::Error;

/// Errors raised by the analysis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid substitution: {0}")]
    Validation(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("precondition not met: {0}")]
    Precondition(String),
    #[error("could not certify result: {0}")]
    Indeterminate(String),
    #[error("division by zero in {0}")]
    DivisionByZero(&'static str),
    #[error("invalid cover: {0}")]
    Cover(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
