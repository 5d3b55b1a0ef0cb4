use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubkitError {
    #[error("budget exceeded: {what} would exceed the limit of {limit}")]
    BudgetExceeded { what: &'static str, limit: usize },

    #[error("malformed permutation: {0}")]
    MalformedPermutation(String),

    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),

    #[error("not subnormal: {0}")]
    NotSubnormal(String),

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("element is not in the product set {0}")]
    NotInProduct(String),

    #[error("subgroup does not normalize the subsystem: {0}")]
    NotNormalizing(String),

    #[error("invalid object set: {0}")]
    InvalidDelta(String),

    #[error("both sides disagree: {0}")]
    SidesDisagree(String),

    #[error("no witness exists: {0}")]
    NoWitness(String),

    #[error("{file}: invalid field `{field}`: {reason}")]
    Parse {
        file: String,
        field: String,
        reason: String,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for SubkitError {
    fn from(e: std::io::Error) -> Self {
        SubkitError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, SubkitError>;
