use thiserror::Error;

/// Every failure the library can report.
///
/// Variants map onto the error names used throughout the crate documentation;
/// the CLI turns them into exit codes via [`Error::kind`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomial is reducible over the rationals: {0}")]
    Reducible(String),
    #[error("isolating interval contains no root of the polynomial")]
    NoRoot,
    #[error("isolating interval contains {0} roots of the polynomial")]
    MultipleRoots(usize),
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("values live in different number fields")]
    FieldMismatch,
    #[error("precision exhausted after {bits} bits: {context}")]
    PrecisionExhausted { bits: u32, context: String },
    #[error("growth hypothesis violated at index {index}: {detail}")]
    HypothesisViolated { index: usize, detail: String },
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("missing parameter a{0}")]
    MissingParam(u32),
    #[error("value {value} at n = {n} has no symbol in the coding")]
    UncodedValue { n: u64, value: String },
    #[error("selectors do not partition index {0}")]
    PartitionViolation(u64),
    #[error("negative index {index} requested at n = {n}")]
    NegativeIndex { n: u64, index: String },
    #[error("morphism is not uniform")]
    NonUniformMorphism,
    #[error("expected a non-negative integer value, got {0}")]
    NotAnInteger(String),
    #[error("{0} is not a Pisot unit with complex conjugates")]
    NotPisot(String),
    #[error("problem too large: {0}")]
    TooLarge(String),
    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Precision,
    Domain,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::PrecisionExhausted { .. } => ErrorKind::Precision,
            Error::Syntax { .. } | Error::UnknownConstant(_) | Error::UnknownName(_) | Error::InvalidArgument(_) => ErrorKind::Usage,
            _ => ErrorKind::Domain,
        }
    }

    /// Short stable identifier for machine-readable error records.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Reducible(_) => "Reducible",
            Error::NoRoot => "NoRoot",
            Error::MultipleRoots(_) => "MultipleRoots",
            Error::InvalidPolynomial(_) => "InvalidPolynomial",
            Error::FieldMismatch => "FieldMismatch",
            Error::PrecisionExhausted { .. } => "PrecisionExhausted",
            Error::HypothesisViolated { .. } => "HypothesisViolated",
            Error::Syntax { .. } => "SyntaxError",
            Error::UnknownConstant(_) => "UnknownConstant",
            Error::MissingParam(_) => "MissingParam",
            Error::UncodedValue { .. } => "UncodedValue",
            Error::PartitionViolation(_) => "PartitionViolation",
            Error::NegativeIndex { .. } => "NegativeIndex",
            Error::NonUniformMorphism => "NonUniformMorphism",
            Error::NotAnInteger(_) => "NotAnInteger",
            Error::NotPisot(_) => "NotPisot",
            Error::TooLarge(_) => "TooLarge",
            Error::InsufficientSamples(_) => "InsufficientSamples",
            Error::Overflow(_) => "Overflow",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::UnknownName(_) => "UnknownName",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
