use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error(transparent)]
    Core(#[from] wittenlab_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}: {message}")]
    CacheLine { path: PathBuf, line: usize, message: String },
    #[error("usage: {0}")]
    Usage(String),
}

impl AppError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        AppError::Io { path: path.into(), source }
    }

    /// Exit code for an error that aborted a command.
    pub fn exit_code(&self) -> i32 {
        use wittenlab_core::Error as E;
        match self {
            AppError::Usage(_) => 2,
            AppError::Core(E::InvalidArgument(_) | E::Parse(_) | E::BudgetExceeded(_) | E::Dimension(_)) => 2,
            _ => 1,
        }
    }
}

pub type AppResult<T> = Result<T, AppError>;
