use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid size {0} is invalid: need an even N >= 8")]
    InvalidGrid(usize),
    #[error("fields live on different grids ({0} vs {1})")]
    GridMismatch(usize, usize),
    #[error("expected {expected} physical samples, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("inverse fractional power of a field with non-zero mean {mean:e}")]
    NonZeroMean { mean: f64 },
    #[error("time step {dt:e} violates the advective CFL limit; try dt <= {suggested:e}")]
    Cfl { dt: f64, suggested: f64 },
    #[error("non-finite state detected at t = {t}")]
    NonFinite { t: f64 },
    #[error("dyadic block index {j} outside [-1, {j_max}]")]
    BlockOutOfRange { j: i32, j_max: i32 },
    #[error("snapshot format error: {0}")]
    Snapshot(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
