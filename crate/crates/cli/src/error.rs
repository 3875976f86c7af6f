use crqa_core::CrqaError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{stage}: {message}")]
    Stage { stage: &'static str, message: String },

    #[error(transparent)]
    Crqa(#[from] CrqaError),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn stage(stage: &'static str, msg: impl std::fmt::Display) -> Self {
        CliError::Stage {
            stage,
            message: msg.to_string(),
        }
    }

    /// 1 for usage errors, 2 for anything that failed at run time.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
