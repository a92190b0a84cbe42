use thiserror::Error;

use crate::config::Scenario;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("i/o failure: {0}")]
    Io(String),
    #[error("{scenario}: failed checks: {}", failed.join(", "))]
    CheckFailed { scenario: Scenario, failed: Vec<String> },
    #[error("{scenario}: {source}")]
    Compute {
        scenario: Scenario,
        source: moyalspin::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ConfigInvalid(_) => 2,
            CliError::Io(_) => 3,
            CliError::CheckFailed { scenario, .. } | CliError::Compute { scenario, .. } => scenario.exit_code(),
        }
    }

    pub fn config(field: &str, err: impl std::fmt::Display) -> Self {
        CliError::ConfigInvalid(format!("{field}: {err}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
