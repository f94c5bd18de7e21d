use thiserror::Error;

/// Errors raised by the verification engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument error: {0}")]
    Argument(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("accuracy error: {0}")]
    Accuracy(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition error: {0}")]
    Precondition(String),
    #[error("geometry error: {0}")]
    Geometry(String),
}

pub type Result<T> = std::result::Result<T, Error>;
