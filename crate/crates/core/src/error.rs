use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid too small: N = {0} (need N >= 8 and even)")]
    GridTooSmall(usize),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("point ({x}, {y}) lies outside the interpolable region")]
    OutOfDomain { x: f64, y: f64 },

    #[error("grid mismatch between fields")]
    GridMismatch,

    #[error("non-finite value at node {0}")]
    NonFinite(usize),

    #[error("cutoff scale R = {scale} does not fit the grid box: need probe half-width + r1*R <= L ({required} > {half_width})")]
    DomainCoverage {
        scale: f64,
        required: f64,
        half_width: f64,
    },

    #[error("vorticity mass within {cells} cells of the grid edge (max |omega| there = {magnitude:e})")]
    Truncation { cells: usize, magnitude: f64 },

    #[error("support violation: {0}")]
    SupportViolation(String),

    #[error("CFL violation: dt = {dt} exceeds {limit} (CFL = {cfl})")]
    Cfl { dt: f64, limit: f64, cfl: f64 },

    #[error("fixed-point iteration did not converge after {iterations} iterations (last change {residual:e})")]
    FixedPoint { iterations: usize, residual: f64 },

    #[error("renormalized Biot-Savart sum did not converge over the scale schedule (last difference {last_difference:e})")]
    Renormalization { last_difference: f64 },

    #[error("flow-map displacement {displacement} exceeds bound {bound}")]
    Displacement { displacement: f64, bound: f64 },

    #[error("insufficient snapshots: {0}")]
    InsufficientSnapshots(String),

    #[error("time {0} is not a snapshot time of the trajectory")]
    NotASnapshot(f64),

    #[error("frame shift of {shift} exits the interpolable box")]
    ShiftExitsBox { shift: f64 },

    #[error("modulus is not Dini: {0}")]
    NonDini(String),

    #[error("invalid modulus of continuity: {0}")]
    InvalidModulus(String),

    #[error("bound violation: {0}")]
    BoundViolation(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Errors caused by the user's configuration rather than a failed check.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config(_)
                | Error::Parse(_)
                | Error::GridTooSmall(_)
                | Error::InvalidGrid(_)
                | Error::Cfl { .. }
                | Error::DomainCoverage { .. }
                | Error::Truncation { .. }
        )
    }
}
