use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("function undefined at eigenvalue {eigenvalue:e}: {reason}")]
    SingularSpectrum { eigenvalue: f64, reason: String },

    #[error("ill-conditioned matrix: {0}")]
    IllConditioned(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Process exit code the CLI uses for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) | Error::ResourceLimit(_) | Error::PreconditionFailed(_) => 2,
            Error::SingularSpectrum { .. } | Error::IllConditioned(_) | Error::NumericalFailure(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
