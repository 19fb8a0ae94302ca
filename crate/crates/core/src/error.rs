use thiserror::Error;

/// Recoverable failures. Contract violations (mismatched dimensions,
/// insufficient jet order) panic instead.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("unsupported operation: {0}")]
    UnsupportedOperation(String),
    #[error("sample graph is disconnected ({components} components); increase k")]
    DisconnectedGraph { components: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
