use thiserror::Error;

/// Errors raised across the crate.
///
/// The three variants map onto distinct process exit codes in the CLI, so
/// callers can tell bad input apart from a resource limit or a violated
/// mathematical invariant.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }

    pub fn consistency(msg: impl Into<String>) -> Self {
        Error::Consistency(msg.into())
    }

    /// Process exit code: 2 invalid input, 3 capacity, 4 invariant violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) => 2,
            Error::Capacity(_) => 3,
            Error::Consistency(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Returns a [`Error::Consistency`] unless `cond` holds.
macro_rules! ensure_consistent {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err($crate::error::Error::Consistency(format!($($arg)+)));
        }
    };
}
pub(crate) use ensure_consistent;
