use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("Fock cutoff {n_max} exceeds the dimension guard {limit}")]
    DimensionOverflow { n_max: usize, limit: usize },

    #[error("eigensolver did not converge for eigenvalue {index} after {iterations} iterations")]
    EigenNoConvergence { index: usize, iterations: usize },

    #[error("spectrum not converged to {tol:e} by n_max = {n_max} (last change {change:e})")]
    TruncationNotConverged { n_max: usize, tol: f64, change: f64 },

    #[error("pair index n = {n} (l = {l}) needs level {needed}, only {available} levels computed")]
    PairOutOfRange { n: usize, l: usize, needed: usize, available: usize },

    #[error("constraint polynomial degree {n} exceeds the raw-evaluation limit {limit}")]
    ConstraintOverflow { n: usize, limit: usize },

    #[error("mixing angle undefined at a degeneracy (g = {g}, epsilon = {epsilon})")]
    Degenerate { g: f64, epsilon: f64 },

    #[error("loop passes within {distance:e} of the conical intersection at (g = {g}, epsilon = {epsilon})")]
    TooCloseToIntersection { g: f64, epsilon: f64, distance: f64 },

    #[error("loop resolution insufficient: {0}")]
    InsufficientResolution(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures of the numerics (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::EigenNoConvergence { .. }
                | Error::TruncationNotConverged { .. }
                | Error::Degenerate { .. }
                | Error::TooCloseToIntersection { .. }
                | Error::InsufficientResolution(_)
                | Error::ConstraintOverflow { .. }
                | Error::PairOutOfRange { .. }
        )
    }
}
