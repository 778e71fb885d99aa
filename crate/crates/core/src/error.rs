use thiserror::Error;

/// Errors raised by the estimators and their plumbing.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("ill-conditioned: {0}")]
    IllConditioned(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("resolution too coarse: {0}")]
    Resolution(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) | Error::Parse(_) | Error::Io(_) | Error::Domain(_) => 2,
            Error::InsufficientData(_)
            | Error::IllConditioned(_)
            | Error::Numeric(_)
            | Error::Resolution(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
