use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] chaoskit::Error),
    #[error("{0}: {1}")]
    Io(PathBuf, std::io::Error),
    #[error("cannot emit an empty report")]
    EmptyReport,
    #[error("report encoding failed: {0}")]
    Encoding(String),
}

pub type Result<T> = std::result::Result<T, CliError>;
