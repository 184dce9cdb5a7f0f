use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    InvalidPrime(u64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid group specification: {0}")]
    GroupSpec(String),

    #[error("element {element} does not belong to group {group}")]
    ElementMismatch { element: String, group: String },

    #[error("operands live over different groups or twists: {0}")]
    OperandMismatch(String),

    #[error("enumeration of {what} would exceed the cap of {cap} elements")]
    CapExceeded { what: String, cap: usize },

    #[error("combing failed to stabilize within {stages} stages at {element}")]
    NotStabilized { element: String, stages: usize },

    #[error("degree error: {0}")]
    Degree(String),

    #[error("scalar {0} is not a unit")]
    NotUnit(String),

    #[error("not a chain complex: composite is nonzero in column {column}")]
    NotAComplex { column: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid structure: {0}")]
    Structure(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
