use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A point violates an inequality, or an inequality is not valid for a polytope.
    #[error("validity violated at row {row}, column {col}: {detail}")]
    Validity {
        row: usize,
        col: usize,
        detail: String,
    },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("unbounded: {0}")]
    Unbounded(String),

    #[error("work budget exhausted: {0}")]
    Budget(String),

    #[error("not an extension: {0}")]
    NotAnExtension(String),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("codec error: {0}")]
    Codec(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Codec(e.to_string())
    }
}
