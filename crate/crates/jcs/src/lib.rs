//! Command-line harness around `jcs-core`: verification suites, tabulation
//! of wavefunctions and kernels, and the harmonic-limit study.

pub mod commands;
pub mod config;
pub mod report;

use std::process::ExitCode;

/// Errors that stop a command before or while it produces output.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub const EXIT_PASS: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Config(_) | CliError::Io(_) => EXIT_CONFIG,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        })
    }
}
