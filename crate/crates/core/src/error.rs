use thiserror::Error;

/// Errors raised by the geometry engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid space parameters (kappa = {kappa}, tau = {tau}): both must be finite")]
    InvalidParams { kappa: f64, tau: f64 },

    #[error("point ({x}, {y}, {z}) lies outside the domain: F = {factor} <= 1e-9")]
    OutOfDomain { x: f64, y: f64, z: f64, factor: f64 },

    #[error("non-finite coordinate or component")]
    NonFinite,

    #[error("tangent vectors are based at different points")]
    BaseMismatch,

    #[error("degenerate chart at (u, v) = ({u}, {v}): Gram determinant {gram}")]
    DegenerateChart { u: f64, v: f64, gram: f64 },

    #[error("adapted frame undefined at (u, v) = ({u}, {v}): sin(alpha) = {sin_alpha}")]
    DegenerateFrame { u: f64, v: f64, sin_alpha: f64 },

    #[error("angle {0} is outside the open interval (0, pi)")]
    AngleOutOfRange(f64),

    #[error("invalid profile state: {0}")]
    InvalidState(String),

    #[error("irregular curve: {0}")]
    IrregularCurve(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
