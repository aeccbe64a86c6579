//! Error type shared by every module, with the process exit code each
//! failure class maps to.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, R13Error>;

/// Failure classes.
///
/// The grouping mirrors the documented exit codes of the command-line
/// front end: configuration problems (2), inconsistent model data (3) and
/// numerical failures (4).
#[derive(Debug, Error)]
pub enum R13Error {
    /// A configuration or model document is malformed or incomplete.
    #[error("configuration error: {0}")]
    Config(String),

    /// A named field of a model document violates its invariant.
    #[error("invalid model field `{field}`: {reason}")]
    InvalidField {
        /// Name of the offending field (for example `l1` or `k[3]`).
        field: String,
        /// Human-readable reason.
        reason: String,
    },

    /// Model data is syntactically valid but fails a consistency audit.
    #[error("inconsistent model data: {0}")]
    Inconsistent(String),

    /// A linear solve, factorization or eigensolve failed or was inaccurate.
    #[error("solver failure: {0}")]
    Solver(String),

    /// Invalid argument passed to a library routine.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Filesystem error.
    #[error("i/o error on {path}: {source}")]
    Io {
        /// Path being read or written.
        path: String,
        /// Underlying error.
        #[source]
        source: std::io::Error,
    },
}

impl R13Error {
    /// Process exit code associated with this failure class.
    pub fn exit_code(&self) -> i32 {
        match self {
            R13Error::Config(_) | R13Error::InvalidArgument(_) | R13Error::Io { .. } => 2,
            R13Error::InvalidField { .. } | R13Error::Inconsistent(_) => 3,
            R13Error::Solver(_) => 4,
        }
    }

    pub(crate) fn field(field: impl Into<String>, reason: impl Into<String>) -> Self {
        R13Error::InvalidField {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        R13Error::Io {
            path: path.into(),
            source,
        }
    }
}
