use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    /// Bad configuration or arguments; the CLI exits with status 2.
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] bsq_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    /// A verification suite found failing properties.
    #[error("verification failed: {0}")]
    Failed(String),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Invalid(_) => 2,
            HarnessError::Core(bsq_core::Error::InvalidParameter { .. })
            | HarnessError::Core(bsq_core::Error::InvalidGrid(_)) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
