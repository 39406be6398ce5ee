use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error(transparent)]
    Solver(orbitset::Error),

    #[error("{0}")]
    Mismatch(String),
}

impl From<orbitset::Error> for CliError {
    fn from(e: orbitset::Error) -> Self {
        match e {
            orbitset::Error::InvalidInput(msg) => CliError::Malformed(msg),
            other => CliError::Solver(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Malformed(_) | CliError::Io { .. } => 2,
            CliError::Solver(_) => 3,
            CliError::Mismatch(_) => 4,
        })
    }
}
