use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("unsupported edge weight type `{0}` (supported: EUC_2D, EXPLICIT/FULL_MATRIX)")]
    UnsupportedEdgeWeight(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid tour: {0}")]
    InvalidTour(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{algorithm} cannot run on a {problem} problem")]
    IncompatibleProblem {
        algorithm: &'static str,
        problem: &'static str,
    },

    #[error("empty candidate set while constructing a tour from city {0}")]
    EmptyCandidates(usize),

    #[error("non-finite gradient at iteration {iteration}")]
    NonFiniteGradient { iteration: usize },

    #[error("{0}")]
    Domain(String),

    #[error("seed {seed} failed: {source}")]
    Seed {
        seed: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::InvalidConfig(msg.into())
    }
}
