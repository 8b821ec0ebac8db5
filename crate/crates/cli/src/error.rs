use std::path::PathBuf;

use hardy_disc_core::DiscError;
use thiserror::Error;

/// Errors raised while reading a configuration or running a scenario.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {key}: {message}")]
    Config {
        line: usize,
        key: String,
        message: String,
    },
    #[error("{key}: {message}")]
    Override { key: String, message: String },
    #[error("scenario {scenario} failed: {source}")]
    Numerical {
        scenario: &'static str,
        #[source]
        source: DiscError,
    },
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot serialize result record: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;
