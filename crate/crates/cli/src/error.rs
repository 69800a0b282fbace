use std::path::Path;
use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments or malformed input documents.
    #[error("{0}")]
    Usage(String),
    /// The computation ran but produced no acceptable answer.
    #[error("{0}")]
    Failed(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 3,
            CliError::Io { .. } => 4,
        })
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

impl From<maxpoly::Error> for CliError {
    fn from(e: maxpoly::Error) -> Self {
        match e {
            maxpoly::Error::Infeasible { .. } | maxpoly::Error::Uncertified(_) => {
                CliError::Failed(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;
