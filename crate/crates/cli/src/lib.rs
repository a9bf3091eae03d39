//! Command-line driver: TOML config to [`RunSpec`], the `solve`, `converge`,
//! `nu-star` and `residual-check` commands, and CSV emission.

pub mod commands;
pub mod config;

use thiserror::Error;

pub use commands::{execute, fmt_float, Output};
pub use config::{parse_config, Command, ConfigError, ProblemChoice, RunSpec};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Config(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl CliError {
    /// 1 for usage, config and i/o problems, 2 for solver failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Solver(_) => 2,
            _ => 1,
        }
    }
}
