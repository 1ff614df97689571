//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("ramp line passes within tolerance of grid node ({i}, {j}); perturb the ramp foot x0")]
    RampNearNode { i: usize, j: usize },
    #[error("invalid ramp geometry: {0}")]
    InvalidGeometry(String),
    #[error("grid resolution must be at least 2, got {0}")]
    ResolutionTooSmall(usize),
    #[error("cut cell {cell} has no valid stabilization pattern: {reason}")]
    PatternInvalid { cell: u32, reason: String },
}

#[derive(Debug, Error)]
pub enum QuadratureError {
    #[error("Gauss-Legendre point count {0} outside supported range 1..=20")]
    PointCountOutOfRange(usize),
    #[error("polygon with {0} vertices is not supported (need 3..=5)")]
    UnsupportedPolygon(usize),
    #[error("polygon is not simple/counterclockwise")]
    NonSimplePolygon,
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("solution blew up at step {step} (t = {t:.6e}): {what}")]
    BlowUp { step: usize, t: f64, what: String },
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error("invalid run setup: {0}")]
    InvalidSetup(String),
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("unknown option `{0}`")]
    UnknownOption(String),
    #[error("invalid value for `{key}`: {msg}")]
    InvalidValue { key: String, msg: String },
    #[error("missing value for `{0}`")]
    MissingValue(String),
}
