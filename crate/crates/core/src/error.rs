use thiserror::Error;

/// Errors produced by the simulator.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter failed validation. `key` names the offending field using
    /// the config-file spelling (e.g. `schedule.alpha_end`).
    #[error("invalid value for `{key}`: {reason}")]
    InvalidParameter { key: String, reason: String },

    #[error("config parse error at line {line}, column {column}: {message}")]
    ConfigParse {
        line: usize,
        column: usize,
        message: String,
    },

    /// The overlap matrix left the positive semidefinite cone during ODE
    /// integration.
    #[error("Gram condition violated at alpha = {alpha}: {detail}")]
    GramViolation { alpha: f64, detail: String },

    #[error("curves do not overlap: [{a_start}, {a_end}] vs [{b_start}, {b_end}]")]
    DisjointGrids {
        a_start: f64,
        a_end: f64,
        b_start: f64,
        b_end: f64,
    },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("{context}: {source}")]
    Scenario {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            key: key.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn with_context(self, context: impl Into<String>) -> Self {
        Error::Scenario {
            context: context.into(),
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
