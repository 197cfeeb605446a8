use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("scalar error: {0}")]
    Scalar(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("rewrite budget of {0} steps exceeded")]
    Budget(usize),
    #[error("no rule for out-of-order pair {0}")]
    MissingRule(String),
    #[error("invalid presentation: {0}")]
    Presentation(String),
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("outside window: {0}")]
    Window(String),
    #[error("parameter constraint violated: {0}")]
    Constraint(String),
    #[error("unknown {0}")]
    Unknown(String),
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;
