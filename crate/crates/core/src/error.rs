use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid scalar `{0}`: expected an optional sign, digits, and optionally `/` and digits")]
pub struct ScalarParseError(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AffineError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("affine dimension must be at least 1")]
    EmptyDimension,
    #[error("matrix is not square: row {row} has {found} entries, expected {expected}")]
    NotSquare {
        row: usize,
        expected: usize,
        found: usize,
    },
    /// `column` is 1-based.
    #[error("column {column} sums to {sum}, expected 1")]
    ColumnSum { column: usize, sum: String },
    #[error("vector entries sum to {sum}, expected 1")]
    EntrySum { sum: String },
    #[error("interval lower endpoint {lo} exceeds upper endpoint {hi}")]
    InvertedInterval { lo: String, hi: String },
    #[error("precision error: divisor interval {0} is not strictly positive")]
    Precision(String),
    #[error("affine index {index} out of range for dimension {dimension}")]
    IndexOutOfRange { index: usize, dimension: usize },
}

/// Errors while reading a machine-definition document.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: matrix `{matrix}`: {source}")]
    Matrix {
        line: usize,
        matrix: String,
        source: AffineError,
    },
    #[error("missing `{0}` directive")]
    Missing(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SerializationError {
    #[error("machine `{0}` has interval-valued entries and cannot be serialized")]
    IntervalMachine(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("no transition defined for state `{state}` on symbol `{symbol}`")]
    MissingTransition { state: String, symbol: char },
    #[error("input symbol `{symbol}` at position {position} is not in the alphabet")]
    InvalidInput { symbol: char, position: usize },
    #[error("configuration budget {budget} exceeded at step {step} ({live} live configurations)")]
    Budget {
        step: usize,
        live: usize,
        budget: usize,
    },
    #[error("invariant violated at step {step}: {detail}")]
    Invariant { step: usize, detail: String },
    #[error("choice sequence does not match a path: {0}")]
    BadChoice(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid parameter: {0}")]
pub struct ParameterError(pub String);

/// Crate-level error, mostly for front ends that want one type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Scalar(#[from] ScalarParseError),
    #[error(transparent)]
    Affine(#[from] AffineError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Serialization(#[from] SerializationError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Parameter(#[from] ParameterError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Failures of the brute-force reference implementations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{blocks} blocks exceed the exhaustive-search limit of {limit}")]
    TooManyBlocks { blocks: usize, limit: usize },
    #[error("naive enumeration exceeded its budget of {budget} paths")]
    Budget { budget: usize },
    #[error("no transition from `{state}` on `{symbol}`")]
    MissingTransition { state: String, symbol: char },
    #[error("input symbol `{0}` is not in the alphabet")]
    InvalidInput(char),
}
