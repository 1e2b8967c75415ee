//! Profile curves and the revolution chart `(s, θ) ↦ (r cos θ, r sin θ, z)`.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use nalgebra::Vector3;

use super::branch::{profile_rhs, rk4_step};
use super::spline::CubicSpline;
use super::{branch_sigma_prime, radial_factor, ProfileState};
use crate::ambient::BcvParams;
use crate::error::{Error, Result};
use crate::immersion::{Chart, ParamDomain, ParametricSurface};

/// RK4 substeps used to reach any arc length from the anchor of an
/// [`IntegratedProfile`].
pub const PROFILE_SUBSTEPS: usize = 256;

/// An arc-length parametrized curve in the orbit space.
pub trait Profile: Send + Sync {
    fn state(&self, s: f64) -> Result<ProfileState>;

    /// `σ'(s)`.
    fn sigma_prime(&self, s: f64) -> Result<f64>;

    fn s_range(&self) -> (f64, f64);
}

/// The vertical line `r = r₀`, `σ = π/2`, whose orbit is a Hopf cylinder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerticalProfile {
    params: BcvParams,
    r0: f64,
    range: (f64, f64),
}

impl VerticalProfile {
    pub fn new(params: &BcvParams, r0: f64, range: (f64, f64)) -> Result<Self> {
        ProfileState::new(params, range.0, r0, 0.0, PI / 2.0)?;
        Ok(Self { params: *params, r0, range })
    }
}

impl Profile for VerticalProfile {
    fn state(&self, s: f64) -> Result<ProfileState> {
        let w = (1.0 + (self.params.tau * self.r0).powi(2)).sqrt();
        Ok(ProfileState {
            s,
            r: self.r0,
            z: w * s,
            sigma: PI / 2.0,
        })
    }

    fn sigma_prime(&self, _s: f64) -> Result<f64> {
        Ok(0.0)
    }

    fn s_range(&self) -> (f64, f64) {
        self.range
    }
}

/// Meridian of the Euclidean sphere of radius `R`, `σ = s / R`; only
/// defined for `κ = τ = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundSphere {
    radius: f64,
    range: (f64, f64),
}

impl RoundSphere {
    /// The meridian with both poles cut off by `margin` radians.
    pub fn new(params: &BcvParams, radius: f64, margin: f64) -> Result<Self> {
        if params.kappa != 0.0 || params.tau != 0.0 {
            return Err(Error::InvalidConfig(String::from("the round sphere profile needs kappa = tau = 0")));
        }
        if !(radius > 0.0 && radius.is_finite()) || !(margin > 0.0 && margin < PI / 2.0) {
            return Err(Error::InvalidConfig(format!("sphere radius {radius} or margin {margin} invalid")));
        }
        Ok(Self {
            radius,
            range: (margin * radius, (PI - margin) * radius),
        })
    }
}

impl Profile for RoundSphere {
    fn state(&self, s: f64) -> Result<ProfileState> {
        let t = s / self.radius;
        Ok(ProfileState {
            s,
            r: self.radius * t.sin(),
            z: -self.radius * t.cos(),
            sigma: t,
        })
    }

    fn sigma_prime(&self, _s: f64) -> Result<f64> {
        Ok(1.0 / self.radius)
    }

    fn s_range(&self) -> (f64, f64) {
        self.range
    }
}

/// Angle law driving an [`IntegratedProfile`].
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileLaw {
    /// `σ'(s) = Σ c_k s^k`.
    Polynomial(Vec<f64>),
    /// `σ' = f₀ − (1/r − κr/4) sin σ`, giving mean curvature `f₀`.
    ConstantMeanCurvature(f64),
    /// `σ' = sin σ (κr/4 − 1/(3r))`.
    NonCmcBranch,
    /// `σ'` is the derivative of an interpolated `σ(s)`.
    Sampled(CubicSpline),
}

impl ProfileLaw {
    pub fn sigma_prime(&self, params: &BcvParams, s: f64, r: f64, sigma: f64) -> f64 {
        match self {
            ProfileLaw::Polynomial(c) => c.iter().rev().fold(0.0, |acc, ck| acc * s + ck),
            ProfileLaw::ConstantMeanCurvature(f0) => f0 - (1.0 / r - 0.25 * params.kappa * r) * sigma.sin(),
            ProfileLaw::NonCmcBranch => branch_sigma_prime(params, r, sigma),
            ProfileLaw::Sampled(spline) => spline.eval(s).1,
        }
    }
}

/// A profile obtained by integrating an angle law from an anchor state.
///
/// Each evaluation integrates from the anchor with [`PROFILE_SUBSTEPS`]
/// equal RK4 steps, so the computed curve depends smoothly on `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegratedProfile {
    params: BcvParams,
    anchor: ProfileState,
    law: ProfileLaw,
    range: (f64, f64),
}

impl IntegratedProfile {
    pub fn new(params: &BcvParams, anchor: ProfileState, law: ProfileLaw, range: (f64, f64)) -> Result<Self> {
        let anchor = ProfileState::new(params, anchor.s, anchor.r, anchor.z, anchor.sigma)?;
        if !(range.0 < range.1) || !range.0.is_finite() || !range.1.is_finite() {
            return Err(Error::InvalidConfig(format!("empty profile range {range:?}")));
        }
        let profile = Self {
            params: *params,
            anchor,
            law,
            range,
        };
        profile.state(range.0)?;
        profile.state(range.1)?;
        Ok(profile)
    }

    /// A profile following sampled `(s, σ)` values, anchored at the first
    /// sample with the given `r` and `z`.
    pub fn from_samples(params: &BcvParams, s: Vec<f64>, sigma: Vec<f64>, r0: f64, z0: f64) -> Result<Self> {
        let spline = CubicSpline::new(s, sigma)?;
        let range = spline.domain();
        let anchor = ProfileState::new(params, range.0, r0, z0, spline.eval(range.0).0)?;
        Self::new(params, anchor, ProfileLaw::Sampled(spline), range)
    }

    pub fn anchor(&self) -> ProfileState {
        self.anchor
    }

    pub fn law(&self) -> &ProfileLaw {
        &self.law
    }
}

impl Profile for IntegratedProfile {
    fn state(&self, s: f64) -> Result<ProfileState> {
        let a = self.anchor;
        if s == a.s {
            return Ok(a);
        }
        let params = &self.params;
        let law = |s: f64, r: f64, sigma: f64| self.law.sigma_prime(params, s, r, sigma);
        let rhs = profile_rhs(params, law);
        let h = (s - a.s) / PROFILE_SUBSTEPS as f64;
        let mut y = Vector3::new(a.r, a.z, a.sigma);
        for k in 0..PROFILE_SUBSTEPS {
            y = rk4_step(&rhs, a.s + k as f64 * h, &y, h);
        }
        ProfileState::new(params, s, y.x, y.y, y.z)
    }

    fn sigma_prime(&self, s: f64) -> Result<f64> {
        let st = self.state(s)?;
        Ok(self.law.sigma_prime(&self.params, s, st.r, st.sigma))
    }

    fn s_range(&self) -> (f64, f64) {
        self.range
    }
}

struct RevolutionChart {
    params: BcvParams,
    profile: Arc<dyn Profile>,
}

impl RevolutionChart {
    /// `(state, r', z', r'', z'')`.
    fn jets(&self, s: f64) -> Result<(ProfileState, f64, f64, f64, f64)> {
        let st = self.profile.state(s)?;
        let sp = self.profile.sigma_prime(s)?;
        let p = &self.params;
        let (sn, cs) = st.sigma.sin_cos();
        let f = radial_factor(p, st.r);
        let w = st.fiber_factor(p);
        let dr = f * cs;
        let dz = w * sn;
        let ddr = 0.5 * p.kappa * st.r * dr * cs - f * sn * sp;
        let ddz = p.tau * p.tau * st.r * dr * sn / w + w * cs * sp;
        Ok((st, dr, dz, ddr, ddz))
    }
}

impl Chart for RevolutionChart {
    fn point(&self, s: f64, theta: f64) -> Result<Vector3<f64>> {
        let st = self.profile.state(s)?;
        let (sn, cs) = theta.sin_cos();
        Ok(Vector3::new(st.r * cs, st.r * sn, st.z))
    }

    fn partials(&self, s: f64, theta: f64) -> Result<Option<[Vector3<f64>; 2]>> {
        let (st, dr, dz, _, _) = self.jets(s)?;
        let (sn, cs) = theta.sin_cos();
        Ok(Some([
            Vector3::new(dr * cs, dr * sn, dz),
            Vector3::new(-st.r * sn, st.r * cs, 0.0),
        ]))
    }

    fn second_partials(&self, s: f64, theta: f64) -> Result<Option<[Vector3<f64>; 3]>> {
        let (st, dr, _, ddr, ddz) = self.jets(s)?;
        let (sn, cs) = theta.sin_cos();
        Ok(Some([
            Vector3::new(ddr * cs, ddr * sn, ddz),
            Vector3::new(-dr * sn, dr * cs, 0.0),
            Vector3::new(-st.r * cs, -st.r * sn, 0.0),
        ]))
    }
}

impl fmt::Debug for RevolutionChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RevolutionChart").field("params", &self.params).finish()
    }
}

/// The orbit of `profile` under rotation, charted by `(s, θ)` over
/// `s_range × [0, 2π]`, with `N = X_s ∧ X_θ / |X_s ∧ X_θ|`.
pub fn revolution_surface(params: &BcvParams, profile: Arc<dyn Profile>) -> ParametricSurface {
    let domain = ParamDomain::new(profile.s_range(), (0.0, TAU));
    let chart = RevolutionChart { params: *params, profile };
    ParametricSurface::new(Arc::new(chart), domain).with_label("revolution")
}

/// The Hopf cylinder `r = r₀` over `s ∈ [−1, 1]`.
pub fn hopf_cylinder(params: &BcvParams, r0: f64) -> Result<ParametricSurface> {
    let profile = VerticalProfile::new(params, r0, (-1.0, 1.0))?;
    Ok(revolution_surface(params, Arc::new(profile)).with_label("hopf-cylinder"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::immersion::{shape_operator, surface_jet};

    #[test]
    fn cylinder_mean_curvature_calibration() {
        for (kappa, tau) in [(0.0, 0.0), (0.0, 0.5), (1.0, 0.5), (-0.5, 1.0)] {
            let p = BcvParams::new(kappa, tau).unwrap();
            for r0 in [0.5, 1.0] {
                let s = hopf_cylinder(&p, r0).unwrap();
                let a = shape_operator(&s, &p, 0.2, 1.1).unwrap();
                let expected = 1.0 / r0 - kappa * r0 / 4.0;
                assert!((a.f - expected).abs() < 1e-8, "{kappa} {tau} {r0}: {}", a.f);
            }
        }
    }

    #[test]
    fn cylinder_frame_is_vertical() {
        let p = BcvParams::new(0.0, 0.7).unwrap();
        let s = hopf_cylinder(&p, 1.5).unwrap();
        let jet = surface_jet(&s, &p, 0.3, 2.0).unwrap();
        assert!(jet.cos_alpha.abs() < 1e-12);
        let e1 = jet.adapted.unwrap().e1;
        assert!((e1.comps - Vector3::z()).amax() < 1e-12);
    }

    #[test]
    fn horizontal_profile_gives_a_plane() {
        let p = BcvParams::new(0.0, 0.0).unwrap();
        let anchor = ProfileState::new(&p, 0.0, 0.5, 0.3, 0.0).unwrap();
        let prof = IntegratedProfile::new(&p, anchor, ProfileLaw::Polynomial(vec![]), (0.0, 1.0)).unwrap();
        let s = revolution_surface(&p, Arc::new(prof));
        let x = s.point_raw(0.7, 1.0).unwrap();
        assert!((x.z - 0.3).abs() < 1e-14);
        assert!((x.xy().norm() - 1.2).abs() < 1e-12);
        assert!(shape_operator(&s, &p, 0.7, 1.0).unwrap().f.abs() < 1e-12);
    }

    #[test]
    fn analytic_partials_match_differences() {
        let p = BcvParams::new(0.8, 0.6).unwrap();
        let anchor = ProfileState::new(&p, 0.0, 1.0, 0.0, 0.9).unwrap();
        let prof = IntegratedProfile::new(&p, anchor, ProfileLaw::Polynomial(vec![0.3, -0.2]), (-0.5, 0.5)).unwrap();
        let s = revolution_surface(&p, Arc::new(prof));
        let numeric = ParametricSurface::from_fn(
            {
                let s = s.clone();
                move |u, v| s.point_raw(u, v).unwrap()
            },
            s.domain(),
        );
        let (u, v) = (0.2, 0.4);
        let [a, b] = s.partials(u, v).unwrap();
        let [c, d] = numeric.partials(u, v).unwrap();
        assert!((a - c).amax() < 1e-8 && (b - d).amax() < 1e-8);
        let sa = s.second_partials(u, v).unwrap();
        let sb = numeric.second_partials(u, v).unwrap();
        for i in 0..3 {
            assert!((sa[i] - sb[i]).amax() < 1e-5, "{i}: {} {}", sa[i], sb[i]);
        }
    }

    #[test]
    fn sphere_needs_flat_space() {
        assert!(RoundSphere::new(&BcvParams::new(1.0, 0.0).unwrap(), 1.0, 0.2).is_err());
        let p = BcvParams::new(0.0, 0.0).unwrap();
        let s = revolution_surface(&p, Arc::new(RoundSphere::new(&p, 2.0, 0.2).unwrap()));
        let x = s.point_raw(1.3, 0.4).unwrap();
        assert!((x.norm() - 2.0).abs() < 1e-14);
        assert!((shape_operator(&s, &p, 1.3, 0.4).unwrap().f - 1.0).abs() < 1e-10);
    }
}
