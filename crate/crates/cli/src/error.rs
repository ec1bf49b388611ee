//! CLI error type carrying the exit-code contract: 2 for config errors,
//! 3 for numerical failures, 1 for I/O problems.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(triwalk_core::Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 1,
        }
    }

    pub fn config(msg: impl Into<String>) -> CliError {
        CliError::Config(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Numeric(e) => write!(f, "numerical failure: {e}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<triwalk_core::Error> for CliError {
    fn from(e: triwalk_core::Error) -> Self {
        CliError::Numeric(e)
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
