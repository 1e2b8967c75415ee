//! Surfaces invariant under rotation about the `z` axis.
//!
//! In cylindrical coordinates `(r, θ, z)` the metric reads
//!
//! ```text
//! g = dr² / F² + r² dθ² / F² + (dz − τ r² dθ / F)²,   F = 1 + κ r² / 4,
//! ```
//!
//! and the orbit space of the rotation carries `g̃ = dr²/F² + dz²/(1 + τ²r²)`.
//! A profile curve `s ↦ (r(s), z(s))` parametrized by `g̃`-arc length is
//! driven by the angle `σ` it makes with `∂/∂r`:
//!
//! ```text
//! r' = F cos σ,   z' = √(1 + τ² r²) sin σ.
//! ```

mod branch;
mod profile;
mod spline;
mod tube;

use nalgebra::Matrix2;

use crate::ambient::{BcvParams, DOMAIN_EPS};
use crate::error::{Error, Result};

pub use branch::{
    integrate_noncmc_branch, observed_order, BranchRow, BranchTrajectory, IntegrationConfig,
    TerminationStatus,
};
pub use profile::{
    hopf_cylinder, revolution_surface, IntegratedProfile, Profile, ProfileLaw, RoundSphere,
    VerticalProfile,
};
pub use spline::CubicSpline;
pub use tube::{geodesic_curvature, hopf_tube, BaseCurve, Circle, Ellipse, RadialLine, SampledCurve};

/// Profile states with `r <= EPS_R` are rejected.
pub const EPS_R: f64 = 1e-8;

/// A point of an arc-length parametrized profile curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileState {
    pub s: f64,
    pub r: f64,
    pub z: f64,
    pub sigma: f64,
}

impl ProfileState {
    pub fn new(params: &BcvParams, s: f64, r: f64, z: f64, sigma: f64) -> Result<Self> {
        if ![s, r, z, sigma].iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite);
        }
        if r <= EPS_R {
            return Err(Error::InvalidState(format!("r = {r} is not above {EPS_R}")));
        }
        let factor = radial_factor(params, r);
        if factor <= DOMAIN_EPS {
            return Err(Error::OutOfDomain { x: r, y: 0.0, z, factor });
        }
        Ok(Self { s, r, z, sigma })
    }

    /// `F(r) = 1 + κ r² / 4`.
    pub fn smoothing_factor(&self, params: &BcvParams) -> f64 {
        radial_factor(params, self.r)
    }

    /// `√(1 + τ² r²)`.
    pub fn fiber_factor(&self, params: &BcvParams) -> f64 {
        (1.0 + (params.tau * self.r).powi(2)).sqrt()
    }

    /// `(r', z') = (F cos σ, √(1 + τ²r²) sin σ)`.
    pub fn velocity(&self, params: &BcvParams) -> (f64, f64) {
        let (s, c) = self.sigma.sin_cos();
        (self.smoothing_factor(params) * c, self.fiber_factor(params) * s)
    }

    /// `r'²/F² + z'²/(1 + τ²r²) − 1`.
    pub fn arc_length_defect(&self, params: &BcvParams) -> f64 {
        let (dr, dz) = self.velocity(params);
        let f = self.smoothing_factor(params);
        let w = self.fiber_factor(params);
        (dr / f).powi(2) + (dz / w).powi(2) - 1.0
    }
}

fn radial_factor(params: &BcvParams, r: f64) -> f64 {
    1.0 + 0.25 * params.kappa * r * r
}

/// The orbit-space metric `diag(1/F², 1/(1 + τ²r²))` at radius `r`.
pub fn orbit_metric(params: &BcvParams, r: f64) -> Result<Matrix2<f64>> {
    if !r.is_finite() || r < 0.0 {
        return Err(Error::InvalidState(format!("radius {r} must be finite and non-negative")));
    }
    let factor = radial_factor(params, r);
    if factor <= DOMAIN_EPS {
        return Err(Error::InvalidState(format!("F = {factor} at r = {r}")));
    }
    Ok(Matrix2::new(
        1.0 / (factor * factor),
        0.0,
        0.0,
        1.0 / (1.0 + (params.tau * r).powi(2)),
    ))
}

/// Invariants of a revolution surface along its profile: `cos α`, and the
/// coefficients of `T = a X_θ + b X_s` and `JT = c X_θ + d X_s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedCoefficients {
    pub cos_alpha: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub sin_sigma: f64,
    pub cos_sigma: f64,
}

impl ReducedCoefficients {
    pub fn sin_alpha_squared(&self) -> f64 {
        1.0 - self.cos_alpha * self.cos_alpha
    }
}

pub fn reduced_quantities(params: &BcvParams, state: &ProfileState) -> Result<ReducedCoefficients> {
    let state = ProfileState::new(params, state.s, state.r, state.z, state.sigma)?;
    let tau = params.tau;
    let r = state.r;
    let f = state.smoothing_factor(params);
    let w = state.fiber_factor(params);
    let (dr, dz) = state.velocity(params);
    let (sin_sigma, cos_sigma) = state.sigma.sin_cos();
    Ok(ReducedCoefficients {
        cos_alpha: cos_sigma / w,
        a: -tau * dr * dr / (f * w * w),
        b: dz / (w * w),
        c: f * dz / (r * w),
        d: tau * r / w,
        sin_sigma,
        cos_sigma,
    })
}

/// `f = (1/r − κr/4) sin σ + σ'`.
pub fn reduced_mean_curvature(params: &BcvParams, state: &ProfileState, sigma_prime: f64) -> Result<f64> {
    let state = ProfileState::new(params, state.s, state.r, state.z, state.sigma)?;
    let r = state.r;
    Ok((1.0 / r - 0.25 * params.kappa * r) * state.sigma.sin() + sigma_prime)
}

/// `(cos α)' = −sin σ σ'/W − τ² r F cos²σ / W³` with `W = √(1 + τ²r²)`.
pub fn cos_alpha_derivative(params: &BcvParams, state: &ProfileState, sigma_prime: f64) -> f64 {
    let w = state.fiber_factor(params);
    let f = state.smoothing_factor(params);
    let (s, c) = state.sigma.sin_cos();
    -s * sigma_prime / w - params.tau.powi(2) * state.r * f * c * c / w.powi(3)
}

/// The reduced biconservative system of a revolution surface:
///
/// ```text
/// R1 = f' [b f − 2τ d − 2 (cos α)'] − 2 f (4τ² − κ) cos α sin²α
/// R2 = f' (3 d f − 2τ b)
/// ```
pub fn reduced_bicon_system(
    params: &BcvParams,
    state: &ProfileState,
    sigma_prime: f64,
    f: f64,
    f_prime: f64,
) -> Result<(f64, f64)> {
    let q = reduced_quantities(params, state)?;
    let tau = params.tau;
    let dcos = cos_alpha_derivative(params, state, sigma_prime);
    let r1 = f_prime * (q.b * f - 2.0 * tau * q.d - 2.0 * dcos)
        - 2.0 * f * params.space_form_defect() * q.cos_alpha * q.sin_alpha_squared();
    let r2 = f_prime * (3.0 * q.d * f - 2.0 * tau * q.b);
    Ok((r1, r2))
}

/// Mean curvature on the non-CMC branch, `f = 2 sin σ / (3r)`.
pub fn branch_mean_curvature(state: &ProfileState) -> f64 {
    2.0 * state.sigma.sin() / (3.0 * state.r)
}

/// The branch angle law `σ' = sin σ (κr/4 − 1/(3r))`.
pub fn branch_sigma_prime(params: &BcvParams, r: f64, sigma: f64) -> f64 {
    sigma.sin() * (0.25 * params.kappa * r - 1.0 / (3.0 * r))
}

/// Derivative of the branch mean curvature along the flow,
/// `f' = −4 sin 2σ / (9 r²)`.
pub fn branch_mean_curvature_derivative(state: &ProfileState) -> f64 {
    -4.0 * (2.0 * state.sigma).sin() / (9.0 * state.r * state.r)
}

/// `(κ − 4τ²) f (cos 2σ − 1 − 2τ²r²) cos σ` with `f = 2 sin σ / (3r)`.
///
/// On the branch `R1` equals this product times `−2 / (3 (1 + τ²r²)^{3/2})`.
pub fn branch_obstruction(params: &BcvParams, state: &ProfileState) -> Result<f64> {
    let state = ProfileState::new(params, state.s, state.r, state.z, state.sigma)?;
    let f = branch_mean_curvature(&state);
    let r = state.r;
    let (_, c) = state.sigma.sin_cos();
    Ok(-params.space_form_defect()
        * f
        * ((2.0 * state.sigma).cos() - 1.0 - 2.0 * (params.tau * r).powi(2))
        * c)
}
