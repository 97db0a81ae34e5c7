use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum Error {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("truncation level mismatch: {0} vs {1}")]
    LevelMismatch(usize, usize),
    #[error("generator index {index} out of range 1..={rank}")]
    BadGenerator { index: usize, rank: usize },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown generator `{name}` at byte {pos}")]
    UnknownGenerator { name: String, pos: usize },
    #[error("constant term must be 0 to exponentiate")]
    ExpConstant,
    #[error("constant term must be 1 to take a logarithm")]
    LogConstant,
    #[error("constant term must be invertible")]
    NotInvertible,
    #[error("series is not primitive")]
    NotPrimitive,
    #[error("not a Lie element")]
    NotLie,
    #[error("ideal generators must be homogeneous of degree >= 1")]
    NonHomogeneous,
    #[error("operation requires the free target (quotient ideal is set)")]
    QuotientTarget,
    #[error("degree {0} exceeds truncation level {1}")]
    DegreeOverflow(usize, usize),
    #[error("json: {0}")]
    Json(String),
    #[error("invalid loop: {0}")]
    InvalidLoop(String),
    #[error("no convergence at {0} steps per segment (loop too close to a singular locus?)")]
    StepUnderflow(usize),
    #[error("no closed form available: {0}")]
    NoClosedForm(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
