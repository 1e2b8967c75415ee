//! Structure-equation residuals: Gauss, Codazzi (adapted-frame form),
//! the compatibility relations of `T`, and the adapted-frame connection.
//!
//! All of these vanish identically for a genuine immersion, so they measure
//! the accuracy of the discrete machinery rather than a property of the
//! surface.

use nalgebra::{Matrix2, Matrix3, Vector3};

use super::calculus::{ambient_derivative_along, directional_step, lambda_field, SURFACE_STEP};
use super::shape::shape_from_jet;
use super::{surface_jet, ParametricSurface};
use crate::ambient::{BcvParams, TangentVector};
use crate::error::Result;

/// Parameter-space step (in arc length) for the Brioschi second derivatives.
pub const CURVATURE_STEP: f64 = 1e-3;

fn first_form_raw(surface: &ParametricSurface, params: &BcvParams, u: f64, v: f64) -> Result<Matrix2<f64>> {
    let p = surface.point(params, u, v)?.coords();
    let [xu, xv] = surface.partials(u, v)?;
    Ok(Matrix2::new(
        params.metric_raw(&p, &xu, &xu),
        params.metric_raw(&p, &xu, &xv),
        params.metric_raw(&p, &xv, &xu),
        params.metric_raw(&p, &xv, &xv),
    ))
}

/// Gaussian curvature of the induced metric by the Brioschi formula, with
/// the first fundamental form differentiated numerically.
pub fn intrinsic_curvature(surface: &ParametricSurface, params: &BcvParams, u: f64, v: f64) -> Result<f64> {
    let m0 = first_form_raw(surface, params, u, v)?;
    let hu = CURVATURE_STEP / m0[(0, 0)].sqrt();
    let hv = CURVATURE_STEP / m0[(1, 1)].sqrt();
    let at = |a: f64, b: f64| first_form_raw(surface, params, a, b);
    let (mup, mum) = (at(u + hu, v)?, at(u - hu, v)?);
    let (mvp, mvm) = (at(u, v + hv)?, at(u, v - hv)?);
    let mpp = at(u + hu, v + hv)?;
    let mpm = at(u + hu, v - hv)?;
    let mmp = at(u - hu, v + hv)?;
    let mmm = at(u - hu, v - hv)?;

    // E = m[0,0], F = m[0,1], G = m[1,1]
    let du = (mup - mum) / (2.0 * hu);
    let dv = (mvp - mvm) / (2.0 * hv);
    let e_vv = (mvp[(0, 0)] - 2.0 * m0[(0, 0)] + mvm[(0, 0)]) / (hv * hv);
    let g_uu = (mup[(1, 1)] - 2.0 * m0[(1, 1)] + mum[(1, 1)]) / (hu * hu);
    let f_uv = (mpp[(0, 1)] - mpm[(0, 1)] - mmp[(0, 1)] + mmm[(0, 1)]) / (4.0 * hu * hv);
    let (e, f, g) = (m0[(0, 0)], m0[(0, 1)], m0[(1, 1)]);
    let (e_u, e_v) = (du[(0, 0)], dv[(0, 0)]);
    let (f_u, f_v) = (du[(0, 1)], dv[(0, 1)]);
    let (g_u, g_v) = (du[(1, 1)], dv[(1, 1)]);

    let m1 = Matrix3::new(
        -0.5 * e_vv + f_uv - 0.5 * g_uu, 0.5 * e_u, f_u - 0.5 * e_v, //
        f_v - 0.5 * g_u, e, f, //
        0.5 * g_v, f, g,
    );
    let m2 = Matrix3::new(
        0.0, 0.5 * e_v, 0.5 * g_u, //
        0.5 * e_v, e, f, //
        0.5 * g_u, f, g,
    );
    let w = e * g - f * f;
    Ok((m1.determinant() - m2.determinant()) / (w * w))
}

/// `K − det A − τ² − (κ − 4τ²) cos²α`.
pub fn gauss_residual(surface: &ParametricSurface, params: &BcvParams, u: f64, v: f64) -> Result<f64> {
    let jet = surface_jet(surface, params, u, v)?;
    let shape = shape_from_jet(surface, params, &jet)?;
    let k = intrinsic_curvature(surface, params, u, v)?;
    let t2 = params.tau * params.tau;
    Ok(k - shape.determinant() - t2 - (params.kappa - 4.0 * t2) * jet.cos_alpha.powi(2))
}

/// Pointwise values of the angle function, `λ`, and their adapted-frame
/// derivatives up to the orders used by the structure equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameDatum {
    pub alpha: f64,
    pub lambda: f64,
    pub e1_alpha: f64,
    pub e2_alpha: f64,
    pub e1_lambda: f64,
    pub e2_lambda: f64,
    pub e1_e1_alpha: f64,
    pub e2_e1_alpha: f64,
    pub e1_e2_alpha: f64,
    pub e2_e2_alpha: f64,
}

impl FrameDatum {
    /// `f = λ + e1(α)`.
    pub fn mean_curvature(&self) -> f64 {
        self.lambda + self.e1_alpha
    }

    pub fn e1_mean_curvature(&self) -> f64 {
        self.e1_lambda + self.e1_e1_alpha
    }

    pub fn e2_mean_curvature(&self) -> f64 {
        self.e2_lambda + self.e2_e1_alpha
    }
}

/// Assembles a [`FrameDatum`] by nested central differences along the
/// adapted frame.
pub fn frame_datum(surface: &ParametricSurface, params: &BcvParams, u: f64, v: f64) -> Result<FrameDatum> {
    let jet = surface_jet(surface, params, u, v)?;
    let frame = jet.adapted_frame()?;
    let alpha = |a: f64, b: f64| -> Result<f64> { Ok(surface_jet(surface, params, a, b)?.alpha()) };
    let frame_derivative = |which: usize| {
        move |a: f64, b: f64| -> Result<f64> {
            let j = surface_jet(surface, params, a, b)?;
            let fr = j.adapted_frame()?;
            let e = if which == 1 { fr.e1 } else { fr.e2 };
            directional_step(&alpha, &j, params, &e.comps, SURFACE_STEP)
        }
    };
    let d1 = frame_derivative(1);
    let d2 = frame_derivative(2);
    let lambda = lambda_field(surface, params);
    let along = |field: &dyn Fn(f64, f64) -> Result<f64>, e: &TangentVector| {
        directional_step(field, &jet, params, &e.comps, SURFACE_STEP)
    };
    Ok(FrameDatum {
        alpha: jet.alpha(),
        lambda: lambda(u, v)?,
        e1_alpha: d1(u, v)?,
        e2_alpha: d2(u, v)?,
        e1_lambda: along(&lambda, &frame.e1)?,
        e2_lambda: along(&lambda, &frame.e2)?,
        e1_e1_alpha: along(&d1, &frame.e1)?,
        e2_e1_alpha: along(&d1, &frame.e2)?,
        e1_e2_alpha: along(&d2, &frame.e1)?,
        e2_e2_alpha: along(&d2, &frame.e2)?,
    })
}

/// The two adapted-frame Codazzi equations evaluated on a datum.
pub fn codazzi_system(params: &BcvParams, d: &FrameDatum) -> (f64, f64) {
    let tau = params.tau;
    let (s, c) = d.alpha.sin_cos();
    let cot = c / s;
    let first = d.e1_e2_alpha + d.lambda * cot * d.e2_alpha + cot * d.e1_alpha * (d.e2_alpha - 2.0 * tau)
        - d.e2_e1_alpha;
    let second = cot
        * (2.0 * d.e2_alpha * d.e2_alpha - d.lambda * d.e1_alpha - 6.0 * tau * d.e2_alpha
            + 4.0 * tau * tau
            + d.lambda * d.lambda)
        + d.e1_lambda
        - d.e2_e2_alpha
        - params.space_form_defect() * c * s;
    (first, second)
}

/// Codazzi residuals at `(u, v)`; requires the adapted frame.
pub fn codazzi_residual(surface: &ParametricSurface, params: &BcvParams, u: f64, v: f64) -> Result<(f64, f64)> {
    let datum = frame_datum(surface, params, u, v)?;
    Ok(codazzi_system(params, &datum))
}

/// For a tangent `X`: `∇_X T − cos α (AX − τJX)` and
/// `g(AX − τJX, T) + X(cos α)`.
pub fn compatibility_residual(
    surface: &ParametricSurface,
    params: &BcvParams,
    u: f64,
    v: f64,
    x: &TangentVector,
) -> Result<(TangentVector, f64)> {
    let jet = surface_jet(surface, params, u, v)?;
    let shape = shape_from_jet(surface, params, &jet)?;
    let p = jet.point.coords();
    let xt = jet.tangent_part(params, &x.comps);
    let t_field = |a: f64, b: f64| -> Result<Vector3<f64>> { Ok(surface_jet(surface, params, a, b)?.t.comps) };
    let cov = ambient_derivative_along(t_field, &jet, params, &xt)?;
    let nabla_t = jet.tangent_part(params, &cov);
    let ax_jx = shape.apply(&jet, params, &xt) - jet.rotate(params, &xt) * params.tau;
    let vector = nabla_t - ax_jx * jet.cos_alpha;
    let cos_field = |a: f64, b: f64| -> Result<f64> { Ok(surface_jet(surface, params, a, b)?.cos_alpha) };
    let x_cos = directional_step(&cos_field, &jet, params, &xt, SURFACE_STEP)?;
    let scalar = params.metric_raw(&p, &ax_jx, &jet.t.comps) + x_cos;
    Ok((jet.vector(vector), scalar))
}

/// Metric norms of `∇_{e_a} e_b` minus the closed forms
/// `∇_{e1}e1 = cot α (e2(α) − 2τ) e2`, `∇_{e2}e1 = λ cot α e2`,
/// `∇_{e1}e2 = −cot α (e2(α) − 2τ) e1`, `∇_{e2}e2 = −λ cot α e1`,
/// in the order `[e1e1, e2e1, e1e2, e2e2]`.
pub fn adapted_connection_residual(
    surface: &ParametricSurface,
    params: &BcvParams,
    u: f64,
    v: f64,
) -> Result<[f64; 4]> {
    let jet = surface_jet(surface, params, u, v)?;
    let frame = jet.adapted_frame()?;
    let shape = shape_from_jet(surface, params, &jet)?;
    let datum_e2_alpha = {
        let alpha = |a: f64, b: f64| -> Result<f64> { Ok(surface_jet(surface, params, a, b)?.alpha()) };
        directional_step(&alpha, &jet, params, &frame.e2.comps, SURFACE_STEP)?
    };
    let cot = jet.cos_alpha / jet.sin_alpha;
    let lam = shape.lambda;
    let (e1, e2) = (frame.e1.comps, frame.e2.comps);
    let field = |which: usize| {
        move |a: f64, b: f64| -> Result<Vector3<f64>> {
            let fr = surface_jet(surface, params, a, b)?.adapted_frame()?;
            Ok(if which == 1 { fr.e1.comps } else { fr.e2.comps })
        }
    };
    let cov = |dir: &Vector3<f64>, which: usize| -> Result<Vector3<f64>> {
        Ok(jet.tangent_part(params, &ambient_derivative_along(field(which), &jet, params, dir)?))
    };
    let expected = [
        e2 * (cot * (datum_e2_alpha - 2.0 * params.tau)),
        e2 * (lam * cot),
        e1 * (-cot * (datum_e2_alpha - 2.0 * params.tau)),
        e1 * (-lam * cot),
    ];
    let actual = [cov(&e1, 1)?, cov(&e2, 1)?, cov(&e1, 2)?, cov(&e2, 2)?];
    let p = jet.point.coords();
    let mut out = [0.0; 4];
    for i in 0..4 {
        let d = actual[i] - expected[i];
        out[i] = params.metric_raw(&p, &d, &d).max(0.0).sqrt();
    }
    Ok(out)
}
