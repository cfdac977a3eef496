use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("integer overflow computing walk counts at power {power}; use the floating-point path or a smaller power")]
    Overflow { power: usize },

    #[error("enumeration guard exceeded: {needed} subsets requested, limit is {limit}")]
    GuardExceeded { needed: u128, limit: u128 },

    #[error("graph has no edges; the Laplacian is zero and generates no frame")]
    EdgelessGraph,

    #[error("vertex {0} is an isolated component; its frame vector would be zero")]
    IsolatedVertex(usize),

    #[error("rank mismatch: Laplacian has {found} nonzero eigenvalues, expected n - p = {expected}")]
    RankMismatch { expected: usize, found: usize },

    #[error("duality residual {0:e} exceeds tolerance")]
    DualityResidual(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
