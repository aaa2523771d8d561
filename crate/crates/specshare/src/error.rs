use thiserror::Error;

/// Failures surfaced by the CLI layer.
#[derive(Debug, Error)]
pub enum AppError {
    /// Malformed config, unknown dataset, bad sweep range.
    #[error("bad input: {0}")]
    Input(String),
    /// Solver rejected the parameters.
    #[error(transparent)]
    Solver(#[from] specshare_core::Error),
    /// File IO.
    #[error(transparent)]
    Io(#[from] std::io::Error),
    /// CSV writer.
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl AppError {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Self::Input(msg.into())
    }
}

/// Result alias for the CLI layer.
pub type AppResult<T> = Result<T, AppError>;
