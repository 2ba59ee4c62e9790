use thiserror::Error;

#[derive(Debug, Error)]
pub enum HoboError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("variable index {index} out of range for {num_vars} variables")]
    IndexOutOfRange { index: usize, num_vars: usize },

    #[error("assignment has length {actual}, expected {expected}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("tensor order {order} is below polynomial degree {degree}")]
    OrderBelowDegree { order: usize, degree: usize },

    #[error("dense tensor with {n}^{order} entries exceeds the limit of {limit}")]
    TooLarge { n: usize, order: usize, limit: usize },

    #[error("QUBO matrix requires degree <= 2, got {0}")]
    NotQuadratic(usize),

    #[error("cannot draw {requested} distinct terms, only {available} monomials exist")]
    InfeasibleTermCount { requested: usize, available: u128 },

    #[error("{0} variables exceed the enumeration limit of {1}")]
    TooManyVariables(usize, usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = HoboError> = std::result::Result<T, E>;
