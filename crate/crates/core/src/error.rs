use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A ratio estimator hit a vanishing denominator.
    #[error("singular estimate: {0}")]
    SingularEstimate(String),

    /// The penalised regression has no unique solution.
    #[error("singular fit: lambda_eff + S2 = {0:e}")]
    SingularFit(f64),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Data { path: PathBuf, message: String },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures caused by the numerics rather than by the input.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::SingularEstimate(_) | Error::SingularFit(_))
    }
}
