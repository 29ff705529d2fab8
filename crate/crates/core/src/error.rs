use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("label count mismatch: {0} vs {1}")]
    LabelMismatch(usize, usize),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("too many labels: {0} (at most 16 supported)")]
    TooManyLabels(usize),
    #[error("label {label} out of range 1..={n}")]
    LabelOutOfRange { label: usize, n: usize },
    #[error("expected a homogeneous element of grade {0}")]
    GradeViolation(usize),
    #[error("parity mismatch: {0}")]
    ParityMismatch(String),
    #[error("split space mismatch: rank {0} vs {1}")]
    SpaceMismatch(usize, usize),
    #[error("unsupported rank {0}")]
    UnsupportedRank(usize),
    #[error("isotropic letter: q(v) = 0")]
    IsotropicLetter,
    #[error("radicand mismatch: {0} vs {1}")]
    RadicandMismatch(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("singular matrix")]
    Singular,
    #[error("degenerate point: {0}")]
    Degenerate(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
