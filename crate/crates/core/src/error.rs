use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("{what}: {requested} exceeds the supported bound {limit}")]
    DimensionOverflow {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("operator `{label}` is not Hermitian (max |A - A^dag| = {deviation:.3e})")]
    NotHermitian { label: String, deviation: f64 },

    #[error("operator is not nilpotent (||Q^2|| / ||Q||^2 = {residual:.3e})")]
    NotNilpotent { residual: f64 },

    #[error("matrix has a negative eigenvalue {eigenvalue:.3e} (norm {norm:.3e})")]
    NegativeEigenvalue { eigenvalue: f64, norm: f64 },

    #[error("ill-conditioned square root: smallest retained eigenvalue {smallest:.3e} vs cutoff {cutoff:.3e}")]
    IllConditioned { smallest: f64, cutoff: f64 },

    #[error("singular generator: {0}")]
    Singular(String),

    #[error("invalid coupling z[{index}] = {value}; couplings must be strictly positive")]
    InvalidCoupling { index: usize, value: f64 },

    #[error("particle number must be even, got {0}")]
    OddParticleNumber(usize),

    #[error("quadrature grid too coarse: {nodes} nodes, need at least {required}")]
    CoarseGrid { nodes: usize, required: usize },

    #[error("superposition has vanishing norm {0:.3e}")]
    VanishingNorm(f64),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("subspace is not invariant under the operator (leakage {0:.3e})")]
    Leakage(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid value for `{field}`: {message}")]
    Config { field: &'static str, message: String },

    #[error("series too short for extrapolation: {0} points, need at least 3")]
    SeriesTooShort(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
