use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("unsupported Coxeter label {0}; supported labels are 2, 3, 4, 5, 6")]
    UnsupportedLabel(u32),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("malformed value {value:?}: {msg}")]
    Malformed { value: String, msg: String },

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("diagram is disconnected; components {0:?}")]
    Disconnected(Vec<Vec<usize>>),

    #[error("Cartan matrix is decomposable; components {0:?}")]
    Decomposable(Vec<Vec<usize>>),

    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("generator index {index} out of range for {len} generators")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("expected Cartan matrix of {expected} type, found {found} type")]
    WrongType { expected: String, found: String },

    #[error("polynomial is reducible over Q: factor {0}")]
    Reducible(String),

    #[error("prime {0} divides the leading coefficient")]
    PrimeDividesLeading(u64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("resource limit exceeded: {what} (limit {limit})")]
    ResourceLimit { what: String, limit: usize },

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
