//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid system instance: {0}")]
    InvalidInstance(String),

    #[error("user index {0} out of range")]
    UserIndex(usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("rate undefined: slot duration is zero but uplink energy {energy} > 0 for user {user}")]
    ZeroSlotPositiveEnergy { user: usize, energy: f64 },

    #[error("Lambert W argument {0} below the principal branch domain")]
    LambertDomain(f64),

    #[error("solver requires unbounded capacities (user {0} has finite storage)")]
    FiniteCapacityUnsupported(usize),

    #[error("oracle limited to K <= {max}, got K = {got}")]
    OracleTooLarge { got: usize, max: usize },

    #[error("linear program infeasible: {0}")]
    LpInfeasible(String),

    #[error("linear program unbounded")]
    LpUnbounded,

    #[error("dual point violates precondition: {0}")]
    DualInfeasible(String),

    #[error("primal recovery failed: {0}")]
    RecoveryFailed(String),

    #[error("invalid sweep spec: {0}")]
    InvalidSpec(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
