use thiserror::Error;

/// Crate-wide error type.
///
/// The CLI maps variants to exit codes: configuration problems exit 1,
/// data/ingestion problems exit 2, and infeasible hyperparameter searches
/// exit 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("config error: {0}")]
    Config(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("no feasible hyperparameter for {method}: {reason}")]
    Infeasible { method: String, reason: String },

    #[error(transparent)]
    Metric(#[from] crate::metrics::MetricError),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code for the CLI: 1 config, 2 data, 3 infeasibility.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidArgument(_) => 1,
            Error::Data(_) | Error::Metric(_) | Error::Io(_) | Error::Csv(_) => 2,
            Error::Infeasible { .. } => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
