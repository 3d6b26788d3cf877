use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("lattice mismatch: divisor on `{left}` combined with divisor on `{right}`")]
    LatticeMismatch { left: String, right: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("enumeration budget exceeded: {needed} cases requested, budget is {budget}")]
    Budget { needed: String, budget: u64 },

    #[error("invalid model: {0}")]
    Model(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable code, used by the command-line front end.
    pub fn code(&self) -> &'static str {
        match self {
            Error::LatticeMismatch { .. } => "E_LATTICE_MISMATCH",
            Error::Precondition(_) => "E_PRECONDITION",
            Error::Parse { .. } => "E_PARSE",
            Error::Budget { .. } => "E_BUDGET",
            Error::Model(_) => "E_MODEL",
            Error::InvalidInput(_) => "E_INPUT",
            Error::Unsupported(_) => "E_UNSUPPORTED",
            Error::Io(_) => "E_IO",
        }
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::InvalidInput(format!("malformed document: {e}"))
    }
}
