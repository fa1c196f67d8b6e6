use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{name} = {value} is outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numeric failure in {context}: {detail}")]
    Numeric {
        context: &'static str,
        detail: String,
    },

    #[error("{context} did not converge: {detail}")]
    NonConvergence {
        context: &'static str,
        detail: String,
    },

    #[error("root of {context} not bracketed by [{lo:e}, {hi:e}]")]
    RootNotBracketed {
        context: &'static str,
        lo: f64,
        hi: f64,
    },

    #[error("{context} needs {requested} free bits but the exhaustive budget is {limit}")]
    BudgetExceeded {
        context: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, domain: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            domain,
        }
    }
}

/// Checks `lo <= value <= hi`, rejecting NaN.
pub(crate) fn check_closed(
    name: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
    domain: &'static str,
) -> Result<()> {
    if value >= lo && value <= hi {
        Ok(())
    } else {
        Err(Error::domain(name, value, domain))
    }
}
