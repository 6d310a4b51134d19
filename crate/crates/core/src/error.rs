use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the engine can report. `code()` is part of the stable CLI
/// output contract.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid flow loop: {0}")]
    InvalidLoop(String),
    #[error("resolution error: {0}")]
    Resolution(String),
    #[error("degenerate orbit: {0}")]
    Degenerate(String),
    #[error("threshold {threshold} hits an eigenvalue of {orbit}")]
    DegenerateConstraint { orbit: String, threshold: f64 },
    #[error("catalog error: {0}")]
    Catalog(String),
    #[error("invalid building: {0}")]
    Building(String),
    #[error("surgery error: {0}")]
    Surgery(String),
    #[error("no core: {0}")]
    NoCore(String),
    #[error("building is not connected")]
    Disconnected,
    #[error("incomplete input, missing: {}", .0.join(", "))]
    IncompleteInput(Vec<String>),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidLoop(_) => "INVALID_LOOP",
            Error::Resolution(_) => "RESOLUTION",
            Error::Degenerate(_) => "DEGENERATE_ORBIT",
            Error::DegenerateConstraint { .. } => "DEGENERATE_CONSTRAINT",
            Error::Catalog(_) => "CATALOG",
            Error::Building(_) => "INVALID_BUILDING",
            Error::Surgery(_) => "SURGERY",
            Error::NoCore(_) => "NO_CORE",
            Error::Disconnected => "DISCONNECTED",
            Error::IncompleteInput(_) => "INCOMPLETE_INPUT",
            Error::Inconsistent(_) => "INCONSISTENT_DATA",
            Error::Internal(_) => "INTERNAL",
            Error::Schema { .. } => "SCHEMA",
            Error::Io(_) => "IO",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
