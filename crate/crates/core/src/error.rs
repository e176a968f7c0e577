use thiserror::Error;

/// Errors raised by the geometry and evolution routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum KerrError {
    #[error("parameters outside the subextremal range: need m > 0 and |a| < m, got a = {a}, m = {m}")]
    NotSubextremal { a: f64, m: f64 },

    #[error("point at or inside the horizon: r = {r} gives Delta = {delta} <= 0")]
    InsideHorizon { r: f64, delta: f64 },

    #[error("polar angle theta = {theta} is too close to the axis for a frame computation")]
    OnAxis { theta: f64 },

    #[error("jet order too low: operation needs {need}, field carries {have}")]
    JetOrder { need: usize, have: usize },

    #[error("boost factor must be positive, got lambda = {0}")]
    NonPositiveBoost(f64),

    #[error("frame inversion stalled outside the perturbative regime (residual {residual:.3e})")]
    InversionStalled { residual: f64 },

    #[error("tortoise-coordinate inversion did not converge for rstar = {rstar}")]
    TortoiseDiverged { rstar: f64 },

    #[error("CFL violation: dt = {dt} exceeds {limit} for this grid")]
    CflViolation { dt: f64, limit: f64 },

    #[error("isothermal shooting solve did not converge")]
    ShootingFailed,

    #[error("invalid sample specification: {0}")]
    BadSampleSpec(String),

    #[error("invalid grid: {0}")]
    BadGrid(String),
}

pub type Result<T> = std::result::Result<T, KerrError>;
