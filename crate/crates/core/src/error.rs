use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("containment violated: {0}")]
    Containment(String),
    #[error("invalid basis: {0}")]
    InvalidBasis(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Short machine-readable tag, used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidField(_) => "invalid-field",
            Error::Shape(_) => "shape",
            Error::FieldMismatch(..) => "field-mismatch",
            Error::Domain(_) => "domain",
            Error::Capacity(_) => "capacity",
            Error::Containment(_) => "containment",
            Error::InvalidBasis(_) => "invalid-basis",
            Error::Degenerate(_) => "degenerate",
            Error::Parse(_) => "parse",
            Error::Internal(_) => "internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
