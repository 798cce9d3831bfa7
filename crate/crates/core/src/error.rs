use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a grid needs at least two dimensions, got {0}")]
    TooFewDimensions(usize),

    #[error("grid dimension {index} is zero; every dimension must be at least 1")]
    ZeroDimension { index: usize },

    #[error("arity mismatch: expected {expected} components, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("coordinate {index} = {value} lies outside 0..={max}")]
    PointOutOfRange { index: usize, value: u64, max: u64 },

    #[error("phase residue {index} = {value} lies outside 0..{modulus}")]
    ResidueOutOfRange {
        index: usize,
        value: u64,
        modulus: u64,
    },

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("{what} needs {needed} states, above the cap of {cap}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        cap: u64,
    },

    #[error("invalid circular sequence: first term {t} exceeds height {m}")]
    InvalidSequence { t: u64, m: u64 },

    #[error("sequence height must be at least 1")]
    ZeroHeight,

    #[error("invalid run bounds: need 1 <= t <= n, got t = {t}, n = {n}")]
    InvalidRun { t: u64, n: u64 },

    #[error("operation needs a two-dimensional grid, got {0} dimensions")]
    NotPlanar(usize),

    #[error("render palette is empty")]
    EmptyPalette,

    #[error("cell size must be at least 1")]
    ZeroCellSize,

    #[error("malformed {what}: {input:?}")]
    Parse { what: &'static str, input: String },

    #[error("inexact polynomial division: {0}")]
    InexactDivision(&'static str),
}
