use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("dimension {0} is not a perfect square")]
    NotPerfectSquare(usize),

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    /// The matrix cannot be inverted; for an A-map at t₁ this means the
    /// intermediate map is undefined there.
    #[error("singular matrix (pivot {pivot:.3e} below threshold {threshold:.3e})")]
    Singular { pivot: f64, threshold: f64 },

    #[error("map is not completely positive (min Choi eigenvalue {min_eigenvalue:.6e})")]
    NotCompletelyPositive { min_eigenvalue: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("negative time {0}")]
    NegativeTime(f64),

    #[error("size cap exceeded: {0}")]
    SizeCap(String),

    #[error("evolver is not linear (residual {residual:.3e})")]
    Nonlinear { residual: f64 },

    #[error("invalid map file: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
