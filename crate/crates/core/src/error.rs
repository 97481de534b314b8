use thiserror::Error;

/// Errors raised by the construction and verification routines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("incomplete function: no value at {0}")]
    IncompleteFunction(String),
    #[error("{0} is not a subset of the ground set")]
    NotASubset(String),
    #[error("naturality system inconsistent")]
    InconsistentSystem,
    #[error("scenario not late: {0}")]
    NotLate(String),
    #[error("invalid set-valued map: {0}")]
    InvalidMap(String),
    #[error("certificate invalid: {0}")]
    CertificateInvalid(String),
    #[error("stub incomplete: no measure at {0}")]
    StubIncomplete(String),
    #[error("schema violation: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
