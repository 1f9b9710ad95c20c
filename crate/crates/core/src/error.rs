use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus is reducible: divisible by {factor}")]
    ReducibleModulus { factor: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{what} needs {needed} steps, budget is {budget}")]
    BudgetExceeded { what: &'static str, needed: u128, budget: u128 },

    #[error("field mismatch: expected GF({expected}), got GF({found})")]
    FieldMismatch { expected: u32, found: u32 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid function basis: evaluation rank {rank} < a - g + 1 = {required}")]
    InvalidFunctionBasis { rank: usize, required: i64 },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
