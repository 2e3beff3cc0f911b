//! Library side of the command-line runner: configuration ingestion,
//! point/profile/sweep evaluation, and tabular export.

pub mod config;
pub mod export;
pub mod run;

use thiserror::Error;

/// Process-level failure classes; exit codes are 0 success, 1 configuration
/// error, 2 numerical failure.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
