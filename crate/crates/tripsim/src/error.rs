use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("config error: {0}")]
    Core(#[from] tripsim_core::Error),

    #[error("config error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("invariant violated: {name}: {detail}")]
    Invariant { name: &'static str, detail: String },
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    /// 1 for a violated output invariant, 2 for anything wrong with the
    /// request or its inputs.
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Invariant { .. } => ExitCode::from(1),
            _ => ExitCode::from(2),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
