use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid coloring: {0}")]
    InvalidColoring(String),
    #[error("generator index {index} out of range for {strands} strands")]
    IndexOutOfRange { index: i64, strands: usize },
    #[error("position {pos} out of range for word of length {len}")]
    PositionOutOfRange { pos: usize, len: usize },
    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
    #[error("infinite word is not color-pure: only finitely many purity indices")]
    NotColorPure,
    #[error("interval ({a}, {b}) does not delete a color-pure sub-braid")]
    IntervalNotColorPure { a: usize, b: usize },
    #[error("malformed certificate: {0}")]
    BadCertificate(String),
    #[error("certificate tail is incompatible with the period presentation: {0}")]
    IncompatibleWithPeriod(String),
    #[error("deletion removes the whole period")]
    DeletesWholePeriod,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("search budget of {budget} states exhausted")]
    BudgetExhausted { budget: usize },
    #[error("no clasp is reachable by braid moves")]
    NoClasp,
    #[error("boundary coloring mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("coloring mismatch: {0}")]
    ColoringMismatch(String),
    #[error("state space of dimension {dim} exceeds the ceiling {ceiling}")]
    DimensionOverflow { dim: u128, ceiling: usize },
    #[error("blocks overlap or are out of range: {0}")]
    BlockOverlap(String),
    #[error("not a full-twist decomposition: {0}")]
    NotTwistAligned(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse { line: e.line(), column: e.column(), msg: e.to_string() }
    }
}
