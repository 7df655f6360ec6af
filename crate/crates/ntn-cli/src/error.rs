//! CLI error type with process exit codes: 2 for configuration problems,
//! 3 for numeric non-convergence, 4 for I/O failures.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Numeric(_) => "numeric",
            CliError::Io(_) => "io",
        }
    }
}

impl From<ntn_core::Error> for CliError {
    fn from(e: ntn_core::Error) -> Self {
        match &e {
            ntn_core::Error::NonConvergence { .. } => CliError::Numeric(e.to_string()),
            ntn_core::Error::Sweep { source, .. } => {
                if matches!(**source, ntn_core::Error::NonConvergence { .. }) {
                    CliError::Numeric(e.to_string())
                } else {
                    CliError::Config(e.to_string())
                }
            }
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
