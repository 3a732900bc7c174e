use thiserror::Error;

/// Errors raised by the library.
///
/// [`Error::Internal`] is reserved for failed runtime checks of facts the
/// theory guarantees; everything else is a domain error caused by the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty carrier: finite sets must be non-empty")]
    EmptyCarrier,

    #[error("domain mismatch: expected a set of size {expected}, found {found}")]
    DomainMismatch { expected: usize, found: usize },

    #[error("element {element} out of range for a set of size {size}")]
    OutOfRange { element: usize, size: usize },

    #[error("carrier too small: {0}")]
    CarrierTooSmall(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("cycle equation fails for faces ({p}, {q})")]
    CycleEquation { p: usize, q: usize },

    #[error("search guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("malformed JSON: {0}")]
    Json(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// True for failed theory-guaranteed checks.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }

    pub(crate) fn json(msg: impl Into<String>) -> Self {
        Error::Json(msg.into())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Returns an internal-consistency error unless `cond` holds.
macro_rules! ensure_internal {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err($crate::error::Error::Internal(format!($($arg)+)));
        }
    };
}
pub(crate) use ensure_internal;
