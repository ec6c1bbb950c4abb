use alloc::string::String;

/// Errors raised by the algebra, counting and verification routines.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("invalid tuple parameter: {0}")]
    InvalidTuple(String),
    #[error("tuple rule degenerate at index {0}")]
    DegenerateTuple(usize),
    #[error("rounding ambiguous at index {0}")]
    RoundingAmbiguous(usize),
    #[error("explicit tuple has no entry at index {0}")]
    TupleExhausted(usize),
    #[error("tuple entry at index {0} exceeds the supported size")]
    TupleEntryTooLarge(usize),
    #[error("truncation too shallow")]
    TruncationTooShallow,
    #[error("truncation too large to enumerate")]
    TruncationTooLarge,
    #[error("context mismatch")]
    ContextMismatch,
    #[error("generation beyond truncation")]
    GenerationBeyondTruncation,
    #[error("p-power reconstruction failed")]
    PowerReconstruction,
    #[error("descriptor out of bounds")]
    DescriptorOutOfBounds,
    #[error("table too large")]
    TableTooLarge,
    #[error("outside trusted zone")]
    OutsideTrustedZone,
    #[error("element outside algebra")]
    OutsideAlgebra,
    #[error("self-similarity requires periodic tuple")]
    NotPeriodic,
    #[error("bounds require R≡1")]
    BoundsRequireUnitR,
    #[error("window too small")]
    WindowTooSmall,
    #[error("generator is not homogeneous")]
    InhomogeneousGenerator,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = core::result::Result<T, Error>;
