use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid coefficient ring: {0}")]
    InvalidRing(String),
    #[error("value {value} is not an element of {ring}")]
    InvalidElement { value: String, ring: String },
    #[error("operation requires a field, got {0}")]
    NotAField(String),
    #[error("unsupported coefficient ring for this operation: {0}")]
    UnsupportedRing(String),
    #[error("characteristic 2 is not supported")]
    CharTwo,
    #[error("not a complex: the differential does not square to zero")]
    NotAComplex,
    #[error("not a dg-submodule: {0}")]
    NotSubmodule(String),
    #[error("zero module")]
    ZeroModule,
    #[error("dimension {dim} exceeds the cap {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },
    #[error("enumeration of {count} items exceeds the cap {cap}")]
    TooLarge { count: u128, cap: u128 },
    #[error("lattice is not full in its ambient space")]
    NotFull,
    #[error("lattice is not stable under the differential")]
    NotDgLattice,
    #[error("lattice is not graded")]
    NotGraded,
    #[error("inconsistent local data at p = {0}")]
    InconsistentLocalData(u64),
    #[error("algebra is not split: {0}")]
    NotSplit(String),
    #[error("idele component at p = {0} is not a unit")]
    NonUnitComponent(u64),
    #[error("not a central idempotent")]
    NotCentralIdempotent,
    #[error("not a unit")]
    NotUnit,
    #[error("homology is not semisimple")]
    HomologyNotSemisimple,
    #[error("unsupported cycle order: {0}")]
    UnsupportedCycleOrder(String),
    #[error("conductor not computed: {0}")]
    ConductorNotComputed(String),
    #[error("unsupported conductor: {0}")]
    UnsupportedConductor(String),
    #[error("unknown example: {0}")]
    UnknownExample(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("not an order: {0}")]
    NotAnOrder(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
