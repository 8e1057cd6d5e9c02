//! Error types shared across the crate.

use thiserror::Error;

/// Errors from Laurent polynomial and matrix arithmetic.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum RingError {
    #[error("variable lists differ: [{left}] vs [{right}]")]
    VarMismatch { left: String, right: String },
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("shape mismatch: {0}x{1} vs {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),
    #[error("matrix not invertible over the ring: determinant {0} is not a unit")]
    NotInvertibleOverRing(String),
    #[error("polynomial parse error: {0}")]
    Parse(String),
}

/// Errors from birack construction and validation.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum BirackError {
    #[error("axiom {which} violated at {witness}")]
    AxiomViolation { which: String, witness: String },
    #[error("invalid constant action: {0}")]
    InvalidConstantAction(String),
    #[error("invalid (t,s,r) parameters: {0}")]
    InvalidTSR(String),
    #[error("bad birack matrix: {0}")]
    BadMatrix(String),
}

/// Errors from diagram parsing, validation and rewriting.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum TangleError {
    #[error("parse error{}: {msg}", slice.map(|s| format!(" in slice {s}")).unwrap_or_default())]
    Parse { msg: String, slice: Option<usize> },
    #[error("strand count inconsistency in slice {slice}: needs {needed} inputs, {avail} available")]
    WidthMismatch {
        slice: usize,
        needed: usize,
        avail: usize,
    },
    #[error("move pattern does not match at level {level}: {msg}")]
    PatternMismatch { level: usize, msg: String },
    #[error("component index {index} out of range (diagram has {count})")]
    ComponentOutOfRange { index: usize, count: usize },
    #[error("operation requires a closed diagram (boundary {boundary_in} in, {boundary_out} out)")]
    NotClosed {
        boundary_in: usize,
        boundary_out: usize,
    },
    #[error("invalid braid word: {0}")]
    BadBraid(String),
}

/// Errors from labelings and weight evaluation.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum WeightError {
    #[error("ring error: {0}")]
    Ring(#[from] RingError),
    #[error("tangle error: {0}")]
    Tangle(#[from] TangleError),
    #[error("labeling does not fit diagram: {0}")]
    LabelMismatch(String),
    #[error("weight tables malformed: {0}")]
    BadTables(String),
    #[error("signatures are not scalars; diagram is not a link")]
    NotALink,
    #[error("boundary labels invalid: {0}")]
    BadBoundary(String),
}

/// Errors from brute-force search drivers.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum SearchError {
    #[error("unsupported size n={0}: exhaustive enumeration is limited to n <= 3; use the family constructors instead")]
    UnsupportedSize(usize),
    #[error("candidate space of {estimate} exceeds budget {budget}; raise --budget to proceed")]
    RefusedBudget { estimate: u128, budget: u128 },
    #[error("bad search specification: {0}")]
    BadSpec(String),
}
