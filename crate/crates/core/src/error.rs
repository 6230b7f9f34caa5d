use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("probability {value} outside [{lo}, {hi}] for {what}")]
    ProbabilityOutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("index {index} out of range for {bits}-bit width")]
    IndexOutOfRange { index: usize, bits: u32 },
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("undefined cell in extended operation table: {0}")]
    UndefinedCell(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("malformed witness: {0}")]
    MalformedWitness(String),
    #[error("relation case {case} requires a {expected} step")]
    CaseStepMismatch { case: u8, expected: &'static str },
    #[error("unsupported table cell: {0}")]
    UnsupportedCell(String),
    #[error("brute-force enumeration too large: {0}")]
    SizeLimit(String),
    #[error("length {m} is not of the form a*2^(n-t) with t = {t}")]
    NotPeriodic { m: usize, t: u32 },
    #[error("info set size {count} exceeds code length {m}")]
    InfoSetTooLarge { count: usize, m: usize },
    #[error("configuration not supported by the SC codec: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
