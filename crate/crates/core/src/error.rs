use thiserror::Error;

use crate::topology::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("graph generation failed: no connected sample after {attempts} attempts")]
    GenerationFailure { attempts: usize },

    #[error("combination matrix violates constraints: {0}")]
    Combination(Violation),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("unstable mean recursion: spectral radius {rho:.6} >= 1")]
    Instability { rho: f64 },

    #[error("all {runs} Monte Carlo runs diverged for `{algorithm}`")]
    EmptyEnsemble { algorithm: String, runs: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid value for `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("unknown key `{0}`")]
    UnknownKey(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }
}
