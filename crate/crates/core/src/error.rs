use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("grid is empty or too coarse: {0}")]
    Grid(String),

    #[error("pattern cut is not normalized (peak = {peak})")]
    NotNormalized { peak: f64 },

    #[error(
        "analytic beamdepth is infinite at r_f = {focus_range} m (limit {limit} m); \
         pass an explicit mainlobe region instead"
    )]
    InfiniteBeamdepth { focus_range: f64, limit: f64 },

    #[error("Cholesky factorization of B failed after regularization (condition estimate {condition_estimate:.3e})")]
    Factorization { condition_estimate: f64 },

    #[error("eigensolver failure: {0}")]
    Eigen(String),

    #[error("weight vector is zero")]
    ZeroVector,
}
