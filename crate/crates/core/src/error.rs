use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("unsupported range: {0}")]
    UnsupportedRange(String),
    #[error("near singularity: {0}")]
    NearSingularity(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("configuration error: {0}")]
    Configuration(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("fitting error: {0}")]
    Fit(String),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("{source_name}:{line}: {message}")]
    Ingestion {
        source_name: String,
        line: usize,
        message: String,
    },
}

impl Error {
    /// True for failures of the numerics themselves (as opposed to bad input).
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Numeric(_)
                | Error::NearSingularity(_)
                | Error::InsufficientPrecision(_)
                | Error::Fit(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
