use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid multidegree: {0}")]
    InvalidDegree(String),

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("element is not homogeneous: {0}")]
    NotHomogeneous(String),

    #[error("operation requires a monomial ideal")]
    NotMonomial,

    /// A resource cap was hit. Never a silent truncation.
    #[error("budget exceeded: {what} needs {needed}, limit is {limit}")]
    BudgetExceeded {
        what: &'static str,
        needed: String,
        limit: u64,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("not a Hilbert polynomial: {0}")]
    NotHilbertPolynomial(String),

    #[error("grid too small: {0}")]
    GridTooSmall(String),

    #[error("values not polynomial of claimed degree: {0}")]
    NotPolynomial(String),

    #[error("stabilization not detected within budget after {attempts} attempts")]
    StabilizationNotDetected { attempts: u32 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for errors caused by a resource cap rather than by bad input.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. } | Error::StabilizationNotDetected { .. }
        )
    }

    pub(crate) fn budget(what: &'static str, needed: impl ToString, limit: u64) -> Self {
        Error::BudgetExceeded {
            what,
            needed: needed.to_string(),
            limit,
        }
    }
}
