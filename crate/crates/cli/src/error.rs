use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Verdict(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 0 success, 2 I/O or parse, 3 invalid argument, 4 failed verdict.
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Io { .. } | CliError::Parse(_) => 2,
            CliError::Invalid(_) => 3,
            CliError::Verdict(_) => 4,
        })
    }
}

impl From<truncvar_core::Error> for CliError {
    fn from(e: truncvar_core::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
