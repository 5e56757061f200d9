use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("no Schmidt coefficient survives truncation at {tol}")]
    AllTruncated { tol: f64 },

    #[error("negative input entry {value} below -{tol}")]
    NegativeInput { value: f64, tol: f64 },

    #[error("invalid Schmidt vector: {0}")]
    InvalidSchmidt(String),

    #[error("invalid alpha grid: {0}")]
    InvalidAlphaGrid(String),

    #[error("{n_sites} sites exceeds the configured cap of {max}")]
    SizeTooLarge { n_sites: usize, max: usize },

    #[error("operator is not symmetric: max |M - M^T| = {max_dev}")]
    NotSymmetric { max_dev: f64 },

    #[error("half-chain cut requires an even site count, got {n}")]
    OddSize { n: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("state is not normalized: |psi| = {norm}")]
    NotNormalized { norm: f64 },

    #[error("invalid bipartition: {0}")]
    InvalidPartition(String),

    #[error("invalid model spec: {0}")]
    InvalidModelSpec(String),

    #[error("requested {k} eigenpairs from a {dim}-dimensional operator")]
    TooManyEigenpairs { k: usize, dim: usize },

    #[error("split index {split} does not partition {len} labels into two nonempty groups")]
    BadSplit { split: usize, len: usize },

    #[error("consecutive-pair interception status never changes over the scan")]
    NoTransition,

    #[error("interception status changes {count} times at the coarse level; need exactly one transition")]
    MultipleTransitions { count: usize },

    #[error("ground state is degenerate (relative gap {gap:e}); excited-state comparison is ill-defined")]
    DegenerateGround { gap: f64 },

    #[error("scaling fit needs at least {needed} points with distinct sizes, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("invalid sweep range: {0}")]
    InvalidRange(String),

    #[error("csv parse error at line {line}: {msg}")]
    CsvParse { line: usize, msg: String },

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
