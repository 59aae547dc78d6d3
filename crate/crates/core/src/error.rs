use thiserror::Error;

/// Errors raised by the numerical modules and the run driver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("eigensolver did not converge in sector m = {sector} after {iterations} iterations")]
    NoConvergence { sector: f64, iterations: usize },

    #[error("energy window [{lo}, {hi}] holds only {count} eigenstates (need at least {required})")]
    ThinWindow {
        lo: f64,
        hi: f64,
        count: usize,
        required: usize,
    },

    #[error("fit did not converge: {reason} (residual norm {residual:.3e})")]
    FitFailed { reason: String, residual: f64 },

    #[error("memory budget exceeded: {what} needs {needed} bytes, budget is {budget}")]
    Budget {
        what: String,
        needed: usize,
        budget: usize,
    },

    #[error("configuration error at `{path}`: {reason}")]
    Config { path: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(field: &str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.to_string(),
            reason: reason.into(),
        }
    }

    /// Process exit code for the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::InvalidParameter { .. } | Error::Usage(_) => 2,
            Error::Io(_) => 1,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
