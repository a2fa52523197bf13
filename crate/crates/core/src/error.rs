use alloc::string::String;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("point set is empty")]
    EmptyPointSet,
    #[error("no grid cell center lies inside the domain at mesh {mesh}")]
    MeshTooCoarse { mesh: f64 },
    #[error("rejection sampling accepted {accepted} of {attempts} candidates (rate below 1e-6)")]
    AcceptanceTooLow { accepted: usize, attempts: u64 },
    #[error("globally bad point set: no radius below {max_radius} passes the good-cube test")]
    GloballyBadPointSet { max_radius: f64 },
    #[error("isolated evaluation point: no solvable local polynomial fit")]
    IsolatedPoint,
    #[error("degenerate configuration: Cholesky failed even with jitter {jitter:e}")]
    Degenerate { jitter: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// True for errors caused by malformed or out-of-contract input, as
    /// opposed to numerical breakdown on valid input.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::DimensionMismatch { .. }
                | Error::InvalidInput(_)
                | Error::EmptyPointSet
                | Error::Unsupported(_)
        )
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
