use thiserror::Error;

/// Errors produced anywhere in the kernel.
#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("division by zero in F_{0}")]
    DivisionByZero(u64),
    #[error("variable count mismatch: {0} vs {1}")]
    VariableCountMismatch(usize, usize),
    #[error("operands belong to different rings")]
    RingMismatch,
    #[error("ideal is not zero-dimensional; length undefined")]
    NotArtinian,
    #[error("ideal is not m-primary in the quotient ring")]
    NotMPrimary,
    #[error("colon by the zero ideal")]
    ColonByZero,
    #[error("saturation did not stabilize within {0} colon steps")]
    SaturationCap(usize),
    #[error("defining ideal must be homogeneous")]
    NotHomogeneous,
    #[error("quotient ring must have positive dimension")]
    ZeroDimensionalRing,
    #[error("generators do not form a parameter ideal")]
    NotParameterIdeal,
    #[error("element is not contained in I_1")]
    NotInFiltration,
    #[error("filtration index must be non-negative")]
    NegativeIndex,
    #[error("no reduction found within {trials} trials (n_max = {n_max})")]
    NoReductionFound { trials: usize, n_max: usize },
    #[error("{0} did not stabilize within horizon {1}")]
    HorizonExceeded(&'static str, usize),
    #[error("Hilbert coefficient fit failed verification; horizon too short")]
    UnverifiableFit,
    #[error("sequence too long for u.s.d. sweep: {0} > 4")]
    SequenceTooLong(usize),
    #[error("consistency check failed: {0}")]
    Consistency(String),
    #[error("ideal is not contained in the maximal ideal")]
    NotInMaximalIdeal,
    #[error("{0}")]
    Unsupported(String),
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
