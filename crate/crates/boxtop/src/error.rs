//! Error type shared by every module, with a coarse classification used by
//! the command-line layer to pick exit codes.

use thiserror::Error;

/// How an error should be reported by a batch run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// A property failed with a witness (exit code 1).
    Semantic,
    /// Malformed or inconsistent input (exit code 2).
    Input,
    /// An enumeration or expansion limit was hit (exit code 3).
    Resource,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty pattern")]
    EmptyPattern,
    #[error("invalid character {found:?} at position {position} in {text:?}")]
    InvalidChar {
        text: String,
        position: usize,
        found: char,
    },
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("cube {pattern} has support {support}, over the budget {budget}")]
    BudgetExceeded {
        pattern: String,
        support: usize,
        budget: usize,
    },
    #[error("dimension {dim} exceeds the enumeration limit {limit}")]
    EnumerationLimit { dim: usize, limit: usize },
    #[error("expansion would exceed the hard cap of {cap} cubes")]
    ExpansionCap { cap: usize },
    #[error("family is not dense: point {witness} extends no member")]
    NotDense { witness: String },
    #[error("cube {pattern} does not contain the centre point")]
    CentreOutside { pattern: String },
    #[error("dimension too small: no fresh coordinate left for set {index}")]
    PoolExhausted { index: usize },
    #[error("point sets differ between witness and base family")]
    PointSetMismatch,
    #[error("not an ultrametric: triple ({x}, {y}, {z}) breaks the strong triangle inequality")]
    UltrametricTriple { x: String, y: String, z: String },
    #[error("invalid metric: {reason}")]
    InvalidMetric { reason: String },
    #[error("points {x} and {y} are never separated")]
    NoSeparation { x: String, y: String },
    #[error("factor {index} has {found} levels, expected {expected}")]
    FactorLevels {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("expected {expected} factors for {levels} levels, found {found}")]
    FactorCount {
        expected: usize,
        levels: usize,
        found: usize,
    },
    #[error("cover not refinable at {point}: no level fits inside a cover member")]
    NotRefinable { point: String },
    #[error("ladder out of range: {reason}")]
    LadderRange { reason: String },
    #[error("not a cover at {point}")]
    NotACover { point: String },
    #[error("box does not match the coordinate profile")]
    ProfileMismatch,
    #[error("invalid parameters: {reason}")]
    Params { reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            NotDense { .. } | NoSeparation { .. } | NotRefinable { .. } | NotACover { .. } => {
                ErrorKind::Semantic
            }
            EnumerationLimit { .. } | ExpansionCap { .. } => ErrorKind::Resource,
            _ => ErrorKind::Input,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
