//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by solvers, generators, diagnostics, and file I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// A design-matrix column has (near-)zero Euclidean norm and cannot be normalized.
    #[error("column {0} has near-zero norm and cannot be normalized")]
    ZeroColumn(usize),

    /// Vector/matrix shapes do not line up.
    #[error("dimension mismatch in {what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    /// Column `col` of a design matrix does not have norm `sqrt(n)`.
    #[error("column {col} has norm {norm}, expected sqrt(n)")]
    BadColumnNorm { col: usize, norm: f64 },

    /// A non-finite value was found where a finite one is required.
    #[error("non-finite value in {0}")]
    NonFinite(String),

    /// The conjugate-gradient denominator collapsed; the restricted Gram
    /// matrix is numerically rank deficient.
    #[error("conjugate gradient breakdown (rank-deficient system)")]
    Breakdown,

    /// A restricted least-squares refit failed because the selected columns
    /// are linearly dependent.
    #[error("rank-deficient active set {0:?}")]
    RankDeficientActiveSet(Vec<usize>),

    /// Model selection was asked to pick from a path with no usable entries.
    #[error("solution path has no usable entries")]
    EmptyPath,

    /// A brute-force enumeration would exceed the desk-scale subset budget.
    #[error("brute-force enumeration too large: {subsets} subsets exceeds budget {budget}")]
    TooLarge { subsets: u128, budget: u128 },

    /// `(T-1) * mu >= 1`, so the coherence-based contraction factor is undefined.
    #[error("denominator vanishes: (T-1)*mu = {0} >= 1")]
    DenominatorVanishes(f64),

    /// Coefficient generation was asked for a zero magnitude scale (sigma = 0
    /// in a mode whose minimum magnitude is proportional to sigma).
    #[error("degenerate coefficient scale: minimum magnitude is zero")]
    DegenerateScale,

    /// Relative error against an identically-zero target is undefined.
    #[error("relative error undefined: true coefficient vector is zero")]
    ZeroTruth,

    /// Aggregation over an empty replication set.
    #[error("cannot aggregate an empty replication set")]
    Empty,

    /// Invalid configuration or argument values.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Malformed CSV input.
    #[error("csv error: {0}")]
    Csv(String),

    /// Underlying I/O failure.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
