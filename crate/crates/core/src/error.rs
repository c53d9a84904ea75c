use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input outside the domain of the requested quantity.
    #[error("parameter domain error: {0}")]
    Domain(String),

    /// Photon subtraction from the vacuum; the state has zero norm.
    #[error("zero-norm state: {0}")]
    ZeroNorm(String),

    #[error("Fock dimension {given} too small, need at least {required}")]
    InsufficientDimension { given: usize, required: usize },

    /// Mass near the truncation boundary would corrupt the result.
    #[error("truncation headroom violated: mass {mass:e} in the top {levels} Fock levels (dim {dim})")]
    Headroom { mass: f64, levels: usize, dim: usize },

    #[error("did not converge: {0}")]
    NoConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
