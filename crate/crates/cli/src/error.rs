use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("case boundary: {0}")]
    Boundary(String),
    #[error("assumption check failed: {0}")]
    CheckFailed(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error(transparent)]
    Core(tailsum_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Core(_) => 2,
            CliError::Boundary(_) => 3,
            CliError::CheckFailed(_) => 4,
            CliError::Io { .. } => 5,
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: io::Error) -> Self {
        CliError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

impl From<tailsum_core::Error> for CliError {
    fn from(e: tailsum_core::Error) -> Self {
        match e {
            tailsum_core::Error::CaseBoundary(m) => CliError::Boundary(m),
            e => CliError::Core(e),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
