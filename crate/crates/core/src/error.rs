use thiserror::Error;

/// Errors produced by the numerical and physical layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is singular to working precision (pivot {pivot})")]
    Singular { pivot: usize },

    #[error("eigenvalue iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("linear model is unstable (spectral abscissa {abscissa:.6e})")]
    Unstable { abscissa: f64 },

    #[error("asymmetry undefined: both transmission coefficients vanish")]
    UndefinedAsymmetry,

    #[error("integration quality check failed: {0}")]
    IntegrationQuality(String),

    #[error("oracle and prediction share no frequency support")]
    DisjointSupport,
}

pub type Result<T> = std::result::Result<T, Error>;
