use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed graymap: {0}")]
    MalformedImage(String),
    #[error("invalid map metadata: {0}")]
    InvalidMeta(String),
    #[error("invalid room annotation: {0}")]
    InvalidRooms(String),
    #[error("unknown room `{0}`")]
    UnknownRoom(String),
    #[error("overlapping rooms `{0}` and `{1}`")]
    OverlappingRooms(String, String),
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error in {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error(transparent)]
    Plan(#[from] crate::planner::PlanError),
    #[error("simulation aborted at t={time:.3}s: {reason}")]
    SimulationAbort { time: f64, reason: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
