use std::path::PathBuf;

use threatfuse_core::{FusionError, MetricsError, RegionError, ScenarioError, SimError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{0}")]
    Scenario(#[from] ScenarioError),
    #[error("{0}")]
    Region(#[from] RegionError),
    #[error("{0}")]
    Fusion(#[from] FusionError),
    #[error("{0}")]
    Sim(#[from] SimError),
    #[error("{0}")]
    Metrics(#[from] MetricsError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn parse(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.to_string(),
        }
    }

    /// 1 usage, 2 validation, 3 runtime.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 1,
            Error::Read { .. } | Error::Parse { .. } | Error::Scenario(_) | Error::Metrics(_) => 2,
            Error::Region(RegionError::NotCovered { .. }) => 3,
            Error::Region(_) => 2,
            Error::Fusion(FusionError::DegenerateEvidence) => 3,
            Error::Fusion(_) => 2,
            Error::Sim(SimError::Run { .. }) => 3,
            Error::Sim(SimError::Config(_)) => 2,
            Error::Write { .. } | Error::Csv(_) => 3,
        }
    }
}
