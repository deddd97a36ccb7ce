use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("mismatched group order: {0} vs {1}")]
    MismatchedOrder(usize, usize),
    #[error("probabilities sum to {0}, too far from 1")]
    ProbabilityDrift(f64),
    #[error("path has unmatched arrows")]
    Unmatched,
    #[error("association invariant violated: {0}")]
    Association(String),
    #[error("infeasible polytope: {0}")]
    Infeasible(String),
    #[error("tail bound {bound:e} exceeds tolerance {tol:e}")]
    TailBound { bound: f64, tol: f64 },
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("routes disagree: {0}")]
    RouteMismatch(String),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
