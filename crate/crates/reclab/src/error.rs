use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// A rounding decision fell within the value's own uncertainty of a
    /// half-integer boundary. The caller must supply more precision.
    #[error("ambiguous rounding: {context} (value within its uncertainty of a half-integer)")]
    AmbiguousRounding { context: String },

    /// A phase or argument could not be resolved to the requested number of
    /// digits after reduction.
    #[error("insufficient precision: {context}")]
    InsufficientPrecision { context: String },

    #[error("singular basis: rows are linearly dependent")]
    SingularBasis,

    #[error("operation requires a square basis ({rows}x{cols} given)")]
    NonSquareBasis { rows: usize, cols: usize },

    #[error("invalid Lovász parameter {num}/{den}: must satisfy 1/4 < delta < 1")]
    InvalidDelta { num: u64, den: u64 },

    /// Every reduced row had a zero first component.
    #[error(
        "no usable vector in the reduced basis (scale parameter too small or degenerate input)"
    )]
    NoUsableVector,

    #[error("no q <= {q_max} satisfies the requested tolerance")]
    NotFound { q_max: String },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("parse error at position {position}: expected {expected}")]
    Parse { position: usize, expected: String },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    /// A solver answer failed its independent verification after retries.
    #[error("verification failed: {context}")]
    VerificationFailed { context: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn ambiguous(context: impl Into<String>) -> Self {
        Error::AmbiguousRounding {
            context: context.into(),
        }
    }

    pub fn insufficient(context: impl Into<String>) -> Self {
        Error::InsufficientPrecision {
            context: context.into(),
        }
    }

    pub fn parse(position: usize, expected: impl Into<String>) -> Self {
        Error::Parse {
            position,
            expected: expected.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
