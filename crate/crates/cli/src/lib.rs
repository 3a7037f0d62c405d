//! Command-line front end: configuration, dispatch and output files.

mod commands;
mod config;

pub use commands::run;
pub use config::{parse_config, Cli, Command, Flags, RunConfig, DEFAULT_N, DEFAULT_OUT, OUT_ENV};

/// Failure classes mapped to exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<compdiff::Error> for CliError {
    fn from(e: compdiff::Error) -> Self {
        if e.is_configuration() || matches!(e, compdiff::Error::Io(_)) {
            CliError::Config(e.to_string())
        } else {
            CliError::Numeric(e.to_string())
        }
    }
}
