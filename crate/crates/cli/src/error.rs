use std::path::PathBuf;
use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("missing input {path}: run the `{stage}` stage first or pass the file explicitly")]
    MissingDependency { stage: &'static str, path: PathBuf },
    #[error("{0}")]
    Failure(String),
    #[error("precision of {bits} bits is below the minimum of {min}")]
    Precision { bits: u32, min: u32 },
    #[error("bridge report not found at {0}")]
    BridgeMissing(PathBuf),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Config(_) | CliError::MissingDependency { .. } | CliError::Io { .. } => 1,
            CliError::Failure(_) => 2,
            CliError::Precision { .. } => 3,
            CliError::BridgeMissing(_) => 4,
        })
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }
}
