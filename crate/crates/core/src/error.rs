use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("empty vector: dimension must be at least 1")]
    EmptyVector,

    #[error("non-finite entry at index {index}")]
    NonFiniteEntry { index: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("initialization failed: {0}")]
    Init(String),

    #[error("non-finite objective or gradient at step {step}")]
    NonFinite { step: u64 },

    #[error("trajectory terminated at step {step}, before {needed} steps were available")]
    Terminated { step: u64, needed: u64 },

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the command-line front-end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 4,
            Error::NonFinite { .. }
            | Error::NonFiniteEntry { .. }
            | Error::Domain(_)
            | Error::Terminated { .. } => 3,
            _ => 2,
        }
    }
}
