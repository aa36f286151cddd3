use crate::rational::ParseRationalError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{field}: {source}")]
    Numeral {
        field: String,
        #[source]
        source: ParseRationalError,
    },
    #[error("{field}: expected {expected} entries, found {found}")]
    Dimension {
        field: String,
        expected: usize,
        found: usize,
    },
    #[error("{field}: not a probability vector ({reason})")]
    NotProbability { field: String, reason: String },
    #[error("{field}: duplicate label {label:?}")]
    DuplicateLabel { field: String, label: String },
    #[error("{field}: {reason}")]
    Invalid { field: String, reason: String },
    #[error("game document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("desk-scale limit exceeded: {0}")]
    TooLarge(String),
    #[error("{0}")]
    Precondition(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Invalid {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn dimension(field: impl Into<String>, expected: usize, found: usize) -> Self {
        Error::Dimension {
            field: field.into(),
            expected,
            found,
        }
    }

    /// True for errors caused by user input rather than by the engine.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Internal(_) | Error::Io(_))
    }
}
