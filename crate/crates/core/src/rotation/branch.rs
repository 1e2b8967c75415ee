//! Fixed-step integration of the non-CMC biconservative branch
//!
//! ```text
//! r' = F cos σ,   z' = √(1 + τ²r²) sin σ,   σ' = sin σ (κr/4 − 1/(3r)),
//! ```
//!
//! along which `f = 2 sin σ / (3r)`.

use nalgebra::Vector3;

use super::{
    branch_mean_curvature, branch_mean_curvature_derivative, branch_sigma_prime, radial_factor,
    reduced_bicon_system, branch_obstruction, ProfileState, EPS_R,
};
use crate::ambient::{BcvParams, DOMAIN_EPS};
use crate::error::{Error, Result};

/// Relative tolerance of the closed-form `f'` against its finite-difference check.
pub const F_PRIME_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationConfig {
    pub step: f64,
    pub max_steps: usize,
    /// Arc length at which integration stops.
    pub s_max: f64,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        Self {
            step: 1e-3,
            max_steps: 1_000_000,
            s_max: 10.0,
        }
    }
}

impl IntegrationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::InvalidConfig(format!("step {} must be positive", self.step)));
        }
        if !self.s_max.is_finite() {
            return Err(Error::InvalidConfig(format!("s_max {} must be finite", self.s_max)));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidConfig(String::from("max_steps must be positive")));
        }
        Ok(())
    }
}

/// Why an integration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminationStatus {
    /// Reached `s_max`.
    Completed,
    /// The row budget `max_steps` was exhausted first.
    MaxSteps,
    /// `r` fell below `10 ε_r`.
    NearAxis,
    /// The profile left the domain `F > ε_F` or produced non-finite values.
    DomainExit,
    /// Closed-form and finite-difference `f'` disagreed.
    SelfConsistency,
}

impl TerminationStatus {
    pub fn name(self) -> &'static str {
        match self {
            TerminationStatus::Completed => "completed",
            TerminationStatus::MaxSteps => "max_steps",
            TerminationStatus::NearAxis => "near_axis",
            TerminationStatus::DomainExit => "domain_exit",
            TerminationStatus::SelfConsistency => "self_consistency",
        }
    }
}

/// One sample of a branch trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchRow {
    pub s: f64,
    pub r: f64,
    pub z: f64,
    pub sigma: f64,
    pub f: f64,
    pub f_prime: f64,
    pub r1: f64,
    pub r2: f64,
    pub obstruction: f64,
    /// Max-norm difference between the full step into this row and two half steps.
    pub shadow_error: f64,
}

impl BranchRow {
    pub fn state(&self) -> ProfileState {
        ProfileState {
            s: self.s,
            r: self.r,
            z: self.z,
            sigma: self.sigma,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchTrajectory {
    pub params: BcvParams,
    pub config: IntegrationConfig,
    pub rows: Vec<BranchRow>,
    pub status: TerminationStatus,
    pub warnings: Vec<String>,
}

impl BranchTrajectory {
    pub fn max_abs_r1(&self) -> f64 {
        self.rows.iter().fold(0.0, |m, r| m.max(r.r1.abs()))
    }

    pub fn max_abs_r2(&self) -> f64 {
        self.rows.iter().fold(0.0, |m, r| m.max(r.r2.abs()))
    }

    pub fn max_shadow_error(&self) -> f64 {
        self.rows.iter().fold(0.0, |m, r| m.max(r.shadow_error))
    }
}

pub(crate) type Rhs<'a> = dyn Fn(f64, &Vector3<f64>) -> Vector3<f64> + 'a;

pub(crate) fn rk4_step(rhs: &Rhs<'_>, s: f64, y: &Vector3<f64>, h: f64) -> Vector3<f64> {
    let k1 = rhs(s, y);
    let k2 = rhs(s + 0.5 * h, &(y + k1 * (0.5 * h)));
    let k3 = rhs(s + 0.5 * h, &(y + k2 * (0.5 * h)));
    let k4 = rhs(s + h, &(y + k3 * h));
    y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

/// Right-hand side for the state `(r, z, σ)` under an angle law `σ'(s, r, σ)`.
pub(crate) fn profile_rhs<'a, L>(params: &'a BcvParams, law: L) -> impl Fn(f64, &Vector3<f64>) -> Vector3<f64> + 'a
where
    L: Fn(f64, f64, f64) -> f64 + 'a,
{
    move |s, y| {
        let (r, sigma) = (y.x, y.z);
        let (sn, cs) = sigma.sin_cos();
        Vector3::new(
            radial_factor(params, r) * cs,
            (1.0 + (params.tau * r).powi(2)).sqrt() * sn,
            law(s, r, sigma),
        )
    }
}

fn branch_rhs(params: &BcvParams) -> impl Fn(f64, &Vector3<f64>) -> Vector3<f64> + '_ {
    profile_rhs(params, move |_, r, sigma| branch_sigma_prime(params, r, sigma))
}

fn branch_row(params: &BcvParams, state: &ProfileState, shadow_error: f64) -> Result<BranchRow> {
    let sp = branch_sigma_prime(params, state.r, state.sigma);
    let f = branch_mean_curvature(state);
    let f_prime = branch_mean_curvature_derivative(state);
    let (r1, r2) = reduced_bicon_system(params, state, sp, f, f_prime)?;
    Ok(BranchRow {
        s: state.s,
        r: state.r,
        z: state.z,
        sigma: state.sigma,
        f,
        f_prime,
        r1,
        r2,
        obstruction: branch_obstruction(params, state)?,
        shadow_error,
    })
}

/// `df/ds` of `f = 2 sin σ / (3r)` by a central difference along the flow.
fn f_prime_finite_difference(params: &BcvParams, y: &Vector3<f64>) -> f64 {
    let rhs = branch_rhs(params);
    let dy = rhs(0.0, y);
    let eps = 1e-6 * y.x.min(1.0);
    let f = |w: Vector3<f64>| 2.0 * w.z.sin() / (3.0 * w.x);
    (f(y + dy * eps) - f(y - dy * eps)) / (2.0 * eps)
}

enum StepCheck {
    Ok(ProfileState),
    Stop(TerminationStatus),
}

fn check_state(params: &BcvParams, s: f64, y: &Vector3<f64>) -> StepCheck {
    if !y.iter().all(|c| c.is_finite()) {
        return StepCheck::Stop(TerminationStatus::DomainExit);
    }
    if y.x < 10.0 * EPS_R {
        return StepCheck::Stop(TerminationStatus::NearAxis);
    }
    if radial_factor(params, y.x) <= DOMAIN_EPS {
        return StepCheck::Stop(TerminationStatus::DomainExit);
    }
    StepCheck::Ok(ProfileState {
        s,
        r: y.x,
        z: y.y,
        sigma: y.z,
    })
}

/// Integrates the branch from `init` with classical RK4 at the fixed
/// configured step, recording `f`, `f'`, the reduced residuals and the
/// obstruction at every row.
///
/// Rows are at `s = s₀ + k h` exactly. Every step is shadowed by two half
/// steps whose difference is reported but never fed back. Early
/// terminations return the partial trajectory with the corresponding status.
pub fn integrate_noncmc_branch(
    params: &BcvParams,
    init: ProfileState,
    config: IntegrationConfig,
) -> Result<BranchTrajectory> {
    config.validate()?;
    let init = ProfileState::new(params, init.s, init.r, init.z, init.sigma)?;
    let mut warnings = Vec::new();
    if params.is_space_form() {
        warnings.push(String::from(
            "kappa = 4 tau^2: the ambient space is a space form and the branch carries no obstruction",
        ));
    }
    let rhs = branch_rhs(params);
    let h = config.step;
    let s0 = init.s;
    let total = ((config.s_max - s0) / h - 1e-9).ceil().max(0.0) as usize;

    let mut rows = vec![branch_row(params, &init, 0.0)?];
    let mut y = Vector3::new(init.r, init.z, init.sigma);
    let mut status = TerminationStatus::Completed;
    for k in 0..total {
        if rows.len() >= config.max_steps {
            status = TerminationStatus::MaxSteps;
            break;
        }
        let s = s0 + k as f64 * h;
        let full = rk4_step(&rhs, s, &y, h);
        let half = rk4_step(&rhs, s + 0.5 * h, &rk4_step(&rhs, s, &y, 0.5 * h), 0.5 * h);
        let s_next = s0 + (k + 1) as f64 * h;
        let state = match check_state(params, s_next, &full) {
            StepCheck::Ok(state) => state,
            StepCheck::Stop(st) => {
                status = st;
                break;
            }
        };
        let row = branch_row(params, &state, (full - half).amax())?;
        let fd = f_prime_finite_difference(params, &full);
        if (fd - row.f_prime).abs() > F_PRIME_TOLERANCE * row.f_prime.abs().max(1.0) {
            status = TerminationStatus::SelfConsistency;
            warnings.push(format!(
                "f' closed form {} disagrees with finite difference {} at s = {}",
                row.f_prime, fd, row.s
            ));
            break;
        }
        rows.push(row);
        y = full;
    }
    Ok(BranchTrajectory {
        params: *params,
        config,
        rows,
        status,
        warnings,
    })
}

fn fixed_run(params: &BcvParams, init: &ProfileState, s_end: f64, steps: usize) -> Vector3<f64> {
    let rhs = branch_rhs(params);
    let h = (s_end - init.s) / steps as f64;
    let mut y = Vector3::new(init.r, init.z, init.sigma);
    for k in 0..steps {
        y = rk4_step(&rhs, init.s + k as f64 * h, &y, h);
    }
    y
}

/// Observed convergence order of the branch integrator from runs with
/// `n`, `2n` and `4n` steps over `[s₀, s_end]`:
/// `log₂(|y_n − y_2n| / |y_2n − y_4n|)`.
pub fn observed_order(params: &BcvParams, init: ProfileState, s_end: f64, n: usize) -> Result<f64> {
    let init = ProfileState::new(params, init.s, init.r, init.z, init.sigma)?;
    if n == 0 || !(s_end > init.s) {
        return Err(Error::InvalidConfig(String::from("need n > 0 and s_end > s0")));
    }
    let y1 = fixed_run(params, &init, s_end, n);
    let y2 = fixed_run(params, &init, s_end, 2 * n);
    let y4 = fixed_run(params, &init, s_end, 4 * n);
    if !(y1.iter().chain(y2.iter()).chain(y4.iter()).all(|c| c.is_finite())) {
        return Err(Error::NonFinite);
    }
    Ok(((y1 - y2).amax() / (y2 - y4).amax()).log2())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn fixed_point_is_stationary() {
        let p = BcvParams::new(3.0, 1.0).unwrap();
        let r0 = (4.0f64 / 9.0).sqrt();
        let init = ProfileState::new(&p, 0.0, r0, 0.0, FRAC_PI_2).unwrap();
        let cfg = IntegrationConfig { s_max: 1.0, ..Default::default() };
        let t = integrate_noncmc_branch(&p, init, cfg).unwrap();
        assert_eq!(t.status, TerminationStatus::Completed);
        assert_eq!(t.rows.len(), 1001);
        for row in &t.rows {
            assert!((row.r - r0).abs() < 1e-12);
            assert!((row.sigma - FRAC_PI_2).abs() < 1e-12);
        }
    }

    #[test]
    fn rows_advance_by_the_step() {
        let p = BcvParams::new(1.0, 1.0).unwrap();
        let init = ProfileState::new(&p, 0.0, 1.0, 0.0, std::f64::consts::FRAC_PI_4).unwrap();
        let cfg = IntegrationConfig { step: 1e-3, s_max: 0.5, max_steps: 10_000 };
        let t = integrate_noncmc_branch(&p, init, cfg).unwrap();
        for (k, row) in t.rows.iter().enumerate() {
            assert_eq!(row.s, k as f64 * 1e-3);
        }
    }

    #[test]
    fn max_steps_bounds_rows() {
        let p = BcvParams::new(0.0, 0.5).unwrap();
        let init = ProfileState::new(&p, 0.0, 1.0, 0.0, 1.0).unwrap();
        let cfg = IntegrationConfig { step: 1e-3, s_max: 5.0, max_steps: 100 };
        let t = integrate_noncmc_branch(&p, init, cfg).unwrap();
        assert_eq!(t.status, TerminationStatus::MaxSteps);
        assert_eq!(t.rows.len(), 100);
    }

    #[test]
    fn sigma_decreases_without_base_curvature() {
        let p = BcvParams::new(0.0, 0.5).unwrap();
        let init = ProfileState::new(&p, 0.0, 1.0, 0.0, 2.0).unwrap();
        let cfg = IntegrationConfig { step: 1e-3, s_max: 0.5, max_steps: 10_000 };
        let t = integrate_noncmc_branch(&p, init, cfg).unwrap();
        for w in t.rows.windows(2) {
            assert!(w[1].sigma < w[0].sigma);
        }
    }

    #[test]
    fn inward_profiles_stop_near_the_axis() {
        let p = BcvParams::new(0.0, 0.5).unwrap();
        let init = ProfileState::new(&p, 0.0, 0.05, 0.0, std::f64::consts::PI).unwrap();
        let cfg = IntegrationConfig { step: 1e-3, s_max: 1.0, max_steps: 10_000 };
        let t = integrate_noncmc_branch(&p, init, cfg).unwrap();
        assert_eq!(t.status, TerminationStatus::NearAxis);
        assert!(t.rows.iter().all(|r| r.r > 10.0 * EPS_R));
    }

    #[test]
    fn invalid_configuration() {
        let p = BcvParams::new(0.0, 0.5).unwrap();
        let init = ProfileState::new(&p, 0.0, 1.0, 0.0, 1.0).unwrap();
        let cfg = IntegrationConfig { step: 0.0, ..Default::default() };
        assert!(integrate_noncmc_branch(&p, init, cfg).is_err());
    }

    #[test]
    fn order_is_four() {
        let p = BcvParams::new(1.0, 0.5).unwrap();
        let init = ProfileState::new(&p, 0.0, 1.0, 0.0, 1.0).unwrap();
        let order = observed_order(&p, init, 1.0, 10).unwrap();
        assert!((order - 4.0).abs() < 0.3, "{order}");
    }
}
