use thiserror::Error;

/// Errors raised by the library. Every variant is a precondition failure on
/// the caller's input except [`Error::Invariant`], which signals a bug.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{ell} divides the modulus {q}")]
    DividesModulus { q: u64, ell: u64 },

    #[error("{what} = {value} exceeds the enumeration bound {bound}")]
    BoundExceeded {
        what: &'static str,
        value: u64,
        bound: u64,
    },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("not supported: {0}")]
    NotSupported(String),

    #[error("beta-set length {length} is shorter than the {parts} parts of the partition")]
    LengthTooShort { length: usize, parts: usize },

    #[error("prime hypothesis failed: {0}")]
    BadPrimeHypothesis(String),

    #[error("action does not descend to the group: {0}")]
    IncompatibleAction(String),

    #[error("group is not finite")]
    NotFinite,

    #[error("endomorphism is not an automorphism")]
    NotAutomorphism,

    #[error("invalid root datum: {0}")]
    InvalidDatum(String),

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Stable machine-readable name of the variant, used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DividesModulus { .. } => "DividesModulus",
            Error::BoundExceeded { .. } => "BoundExceeded",
            Error::Overflow(_) => "Overflow",
            Error::NotSupported(_) => "NotSupported",
            Error::LengthTooShort { .. } => "LengthTooShort",
            Error::BadPrimeHypothesis(_) => "BadPrimeHypothesis",
            Error::IncompatibleAction(_) => "IncompatibleAction",
            Error::NotFinite => "NotFinite",
            Error::NotAutomorphism => "NotAutomorphism",
            Error::InvalidDatum(_) => "InvalidDatum",
            Error::InvalidWitness(_) => "InvalidWitness",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Parse { .. } => "ParseError",
            Error::Invariant(_) => "InvariantViolation",
        }
    }

    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
