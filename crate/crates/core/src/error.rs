use thiserror::Error;

/// Errors raised while constructing or checking equivariant data.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Input data failed validation (bad group table, non-subgroup, wrong flavor, ...).
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A construction would exceed one of the configured size caps.
    #[error("size guard exceeded: {what} would have size {size} (cap {cap})")]
    SizeGuard {
        what: String,
        size: usize,
        cap: usize,
    },

    /// A structural check failed on data produced by the library itself.
    #[error("verification failed: {0}")]
    Verification(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn verification(msg: impl Into<String>) -> Self {
        Error::Verification(msg.into())
    }

    /// Process exit code used by the command-line tool for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Verification(_) => 1,
            Error::Invalid(_) => 2,
            Error::SizeGuard { .. } => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
