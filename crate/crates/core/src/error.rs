use thiserror::Error;

/// Errors produced by the library. Most operations are total on their
/// documented domains; these variants cover the explicit rejections.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("evaluation point must satisfy |q| < 1, got |q| = {0}")]
    OutsideUnitDisk(String),
    #[error("index must be admissible (first entry >= 2), got {0}")]
    NotAdmissible(String),
    #[error("series order {have} is below the required {need}")]
    InsufficientOrder { have: usize, need: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
