use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AppError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{path}:{line}: {message}")]
    Config { path: PathBuf, line: usize, message: String },
    #[error(transparent)]
    Core(#[from] scatterqual_core::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Csv { path: PathBuf, source: csv::Error },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl AppError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        AppError::Io { path: path.into(), source }
    }

    /// 1 for input problems, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Numerical(_) => 2,
            AppError::Core(e) if !e.is_input_error() => 2,
            _ => 1,
        }
    }
}

pub type Result<T, E = AppError> = std::result::Result<T, E>;
