use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("alphabet error: {0}")]
    Alphabet(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("type mismatch: {0}")]
    TypeMismatch(String),

    /// A configured budget was exhausted. Recoverable; never a silent truncation.
    #[error("cap exceeded: {what} (cap {cap})")]
    CapExceeded { what: String, cap: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("hypothesis fails: {0}")]
    Hypothesis(String),

    #[error("normalization failed: {0}")]
    NormalizationFailed(String),

    #[error("internal invariant broken: {0}")]
    Internal(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub fn cap(what: impl Into<String>, cap: usize) -> Self {
        Error::CapExceeded { what: what.into(), cap }
    }

    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
