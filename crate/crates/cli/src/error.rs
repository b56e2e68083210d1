use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("invalid parameter: {0}")]
    Model(#[from] udwsim::Error),
    #[error("check failed: {0}")]
    Check(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    /// 0 success, 2 config error, 3 oracle or statistical failure, 1 anything else.
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            Self::Config(_) | Self::Model(_) => 2,
            Self::Check(_) => 3,
            Self::Io(_) | Self::Output(_) => 1,
        })
    }
}

impl From<toml::de::Error> for CliError {
    fn from(e: toml::de::Error) -> Self {
        Self::Config(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::Output(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::Output(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
