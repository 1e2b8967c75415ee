//! Biconservativity diagnostics for surfaces in `N_{κ,τ}`.
//!
//! A surface with mean curvature `f = trace A` and unit normal `N` is
//! biconservative when the tangential part of its bitension field,
//!
//! ```text
//! 2 A(grad f) + f grad f − 2 f Ric(N)^⊤,
//! ```
//!
//! vanishes, and biharmonic when additionally the normal part
//! `Δf + f |A|² − f Ric(N, N)` vanishes.

use crate::ambient::{BcvParams, TangentVector};
use crate::error::{Error, Result};
use crate::immersion::{
    codazzi_system, frame_datum, shape_operator, surface_gradient, surface_jet, surface_laplacian,
    FrameDatum, MeanCurvatureField, ParametricSurface, SurfaceJet,
};

/// Coefficients of the constant-angle quartic below this magnitude are zero.
pub const QUARTIC_DEGENERATE_EPS: f64 = 1e-12;

/// Values of `μ = λ²` above this (negative) threshold count as real roots.
pub const QUARTIC_ROOT_EPS: f64 = 1e-12;

/// The bitension components of a surface at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BitensionResiduals {
    /// `2A(grad f) + f grad f − 2f Ric(N)^⊤`.
    pub tangential: TangentVector,
    /// Metric norm of `tangential`.
    pub tangential_norm: f64,
    /// `Δf + f|A|² − f Ric(N, N)`.
    pub normal: f64,
    /// The adapted-frame biconservative system evaluated by nested differences.
    pub frame_pair: Option<(f64, f64)>,
    /// `(g(τ^⊤, e1), g(τ^⊤, e2))` of the tangential component.
    pub frame_components: Option<(f64, f64)>,
}

/// What the constant-angle analysis concludes at a given angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuarticConclusion {
    /// `λ` is one of finitely many constants, the real roots of the quartic.
    ConstantRoots,
    /// Every coefficient vanishes (`α = π/2`): the remaining equations force
    /// `e1(λ) = 0` and `e2(λ) = 0`, so `λ` is constant but unconstrained.
    LambdaConstant,
}

/// The even quartic `c4 λ⁴ + c2 λ² + c0` satisfied by `λ` on a
/// biconservative constant-angle surface.
#[derive(Debug, Clone, PartialEq)]
pub struct QuarticReport {
    pub alpha: f64,
    /// `[c4, c2, c0]`.
    pub coefficients: [f64; 3],
    /// Real roots in increasing order, repeated roots listed once.
    pub real_roots: Vec<f64>,
    pub degenerate: bool,
    pub conclusion: QuarticConclusion,
}

impl QuarticReport {
    pub fn evaluate(&self, lambda: f64) -> f64 {
        let [c4, c2, c0] = self.coefficients;
        let mu = lambda * lambda;
        (c4 * mu + c2) * mu + c0
    }

    /// Largest coefficient magnitude.
    pub fn scale(&self) -> f64 {
        self.coefficients.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }
}

/// `Ric(N)^⊤ = (4τ² − κ) cos α sin α e1`; requires the adapted frame.
pub fn ricci_normal_tangential(params: &BcvParams, jet: &SurfaceJet) -> Result<TangentVector> {
    let frame = jet.adapted_frame()?;
    let coeff = params.space_form_defect() * jet.cos_alpha * jet.sin_alpha;
    Ok(frame.e1.scale(coeff))
}

/// `Ric(N)^⊤` by expanding `N` in the ambient frame and projecting; valid
/// for every angle.
pub fn ricci_normal_tangential_generic(params: &BcvParams, jet: &SurfaceJet) -> TangentVector {
    let p = jet.point.coords();
    let n = params.frame_comps_raw(&p, &jet.normal.comps);
    let ric_n = params.ricci_frame_diagonal().component_mul(&n);
    let comps = params.coords_from_frame_raw(&p, &ric_n);
    jet.vector(jet.tangent_part(params, &comps))
}

/// The three terms of the tangential bitension at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentialTerms {
    /// `2 A(grad f)`.
    pub shape: TangentVector,
    /// `f grad f`.
    pub gradient: TangentVector,
    /// `2 f Ric(N)^⊤`.
    pub curvature: TangentVector,
    pub f: f64,
}

impl TangentialTerms {
    pub fn total(&self) -> TangentVector {
        TangentVector {
            base: self.shape.base,
            comps: self.shape.comps + self.gradient.comps - self.curvature.comps,
        }
    }
}

/// The individual terms `2A(grad f)`, `f grad f` and `2f Ric(N)^⊤`.
pub fn tangential_terms(surface: &ParametricSurface, params: &BcvParams, u: f64, v: f64) -> Result<TangentialTerms> {
    let jet = surface_jet(surface, params, u, v)?;
    let shape = shape_operator(surface, params, u, v)?;
    let field = MeanCurvatureField { surface, params };
    let grad = surface_gradient(&field, surface, params, u, v)?;
    let f = shape.f;
    let ric = ricci_normal_tangential_generic(params, &jet);
    Ok(TangentialTerms {
        shape: jet.vector(shape.apply(&jet, params, &grad.comps) * 2.0),
        gradient: grad.scale(f),
        curvature: ric.scale(2.0 * f),
        f,
    })
}

/// `2A(grad f) + f grad f − 2f Ric(N)^⊤` at `(u, v)`.
pub fn tangential_bitension(surface: &ParametricSurface, params: &BcvParams, u: f64, v: f64) -> Result<TangentVector> {
    Ok(tangential_terms(surface, params, u, v)?.total())
}

/// `Δf + f|A|² − f Ric(N, N)` at `(u, v)`, with `Δ = −div ∘ grad`.
pub fn normal_bitension(surface: &ParametricSurface, params: &BcvParams, u: f64, v: f64) -> Result<f64> {
    let jet = surface_jet(surface, params, u, v)?;
    let shape = shape_operator(surface, params, u, v)?;
    let field = MeanCurvatureField { surface, params };
    let lap = surface_laplacian(&field, surface, params, u, v)?;
    let p = jet.point.coords();
    let ric_nn = params.ricci_raw(&p, &jet.normal.comps, &jet.normal.comps);
    Ok(lap + shape.f * shape.norm_squared() - shape.f * ric_nn)
}

/// Components `(g(V, e1), g(V, e2))` of a tangent vector in the adapted frame.
pub fn frame_components(params: &BcvParams, jet: &SurfaceJet, w: &TangentVector) -> Result<(f64, f64)> {
    let frame = jet.adapted_frame()?;
    let p = jet.point.coords();
    Ok((
        params.metric_raw(&p, &w.comps, &frame.e1.comps),
        params.metric_raw(&p, &w.comps, &frame.e2.comps),
    ))
}

/// Every bitension diagnostic at `(u, v)`.
pub fn bitension_residuals(surface: &ParametricSurface, params: &BcvParams, u: f64, v: f64) -> Result<BitensionResiduals> {
    let jet = surface_jet(surface, params, u, v)?;
    let tangential = tangential_bitension(surface, params, u, v)?;
    let normal = normal_bitension(surface, params, u, v)?;
    let (frame_pair, frame_comps) = if jet.is_degenerate() {
        (None, None)
    } else {
        (
            Some(frame_system_residual(surface, params, u, v)?),
            Some(frame_components(params, &jet, &tangential)?),
        )
    };
    Ok(BitensionResiduals {
        tangential_norm: params.norm(&tangential),
        tangential,
        normal,
        frame_pair,
        frame_components: frame_comps,
    })
}

/// The adapted-frame biconservative system on a datum, with `f = λ + e1(α)`:
///
/// ```text
/// e1(f)(λ + 3e1(α)) + 2e2(f)(e2(α) − τ) − 2(4τ² − κ) f cos α sin α
/// 2e1(f)(e2(α) − τ) + (3λ + e1(α)) e2(f)
/// ```
pub fn frame_system(params: &BcvParams, d: &FrameDatum) -> (f64, f64) {
    let (s, c) = d.alpha.sin_cos();
    let f = d.mean_curvature();
    let e1f = d.e1_mean_curvature();
    let e2f = d.e2_mean_curvature();
    let off = d.e2_alpha - params.tau;
    let first = e1f * (d.lambda + 3.0 * d.e1_alpha) + 2.0 * e2f * off
        - 2.0 * params.space_form_defect() * f * c * s;
    let second = 2.0 * e1f * off + (3.0 * d.lambda + d.e1_alpha) * e2f;
    (first, second)
}

/// [`frame_system`] on a datum assembled by nested differences at `(u, v)`.
pub fn frame_system_residual(surface: &ParametricSurface, params: &BcvParams, u: f64, v: f64) -> Result<(f64, f64)> {
    let datum = frame_datum(surface, params, u, v)?;
    Ok(frame_system(params, &datum))
}

/// Coefficients `[c4, c2, c0]` of the constant-angle quartic
///
/// ```text
/// 6 cot α λ⁴ + [3 sin 2α (8τ² − κ) + 8τ² cot α (3cos²α − 1)] λ²
///     − 8τ² cos α (κ sin α + 4τ² cot α cos α)
/// ```
pub fn quartic_coefficients(params: &BcvParams, alpha: f64) -> [f64; 3] {
    let (kappa, t2) = (params.kappa, params.tau * params.tau);
    let (s, c) = alpha.sin_cos();
    let cot = c / s;
    [
        6.0 * cot,
        3.0 * (2.0 * alpha).sin() * (8.0 * t2 - kappa) + 8.0 * t2 * cot * (3.0 * c * c - 1.0),
        -8.0 * t2 * c * (kappa * s + 4.0 * t2 * cot * c),
    ]
}

fn push_root(roots: &mut Vec<f64>, mu: f64) {
    if mu < -QUARTIC_ROOT_EPS || !mu.is_finite() {
        return;
    }
    let lam = mu.max(0.0).sqrt();
    roots.push(lam);
    roots.push(-lam);
}

/// Real roots of `c4 μ² + c2 μ + c0` in `μ = λ²`, mapped back to `λ`.
fn even_quartic_roots([c4, c2, c0]: [f64; 3]) -> Vec<f64> {
    let mut roots = Vec::new();
    let scale = c4.abs().max(c2.abs()).max(c0.abs());
    if c4.abs() <= QUARTIC_DEGENERATE_EPS * scale.max(1.0) {
        if c2.abs() > QUARTIC_DEGENERATE_EPS {
            push_root(&mut roots, -c0 / c2);
        }
    } else {
        let disc = c2 * c2 - 4.0 * c4 * c0;
        if disc >= 0.0 {
            // Stable form: q = −(c2 + sign(c2)√disc)/2, roots q/c4 and c0/q.
            let q = -0.5 * (c2 + c2.signum() * disc.sqrt());
            if q != 0.0 {
                push_root(&mut roots, q / c4);
                push_root(&mut roots, c0 / q);
            } else {
                push_root(&mut roots, 0.0);
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * b.abs().max(1.0));
    roots
}

/// Constant-angle analysis at angle `α ∈ (0, π)`.
pub fn constant_angle_suite(params: &BcvParams, alpha: f64) -> Result<QuarticReport> {
    if !(alpha > 0.0 && alpha < std::f64::consts::PI) {
        return Err(Error::AngleOutOfRange(alpha));
    }
    let coefficients = quartic_coefficients(params, alpha);
    let degenerate = coefficients.iter().all(|c| c.abs() < QUARTIC_DEGENERATE_EPS);
    let (real_roots, conclusion) = if degenerate {
        (Vec::new(), QuarticConclusion::LambdaConstant)
    } else {
        (even_quartic_roots(coefficients), QuarticConclusion::ConstantRoots)
    };
    Ok(QuarticReport {
        alpha,
        coefficients,
        real_roots,
        degenerate,
        conclusion,
    })
}

/// The frame datum of a constant-angle surface with constant `α` and
/// pointwise value `λ`: all derivatives of `α` vanish, `e1(λ)` comes from
/// the Codazzi equation and `e2(λ)` from the second biconservative equation.
pub fn constant_angle_datum(params: &BcvParams, alpha: f64, lambda: f64) -> Result<FrameDatum> {
    if !(alpha > 0.0 && alpha < std::f64::consts::PI) {
        return Err(Error::AngleOutOfRange(alpha));
    }
    if lambda == 0.0 {
        return Err(Error::InvalidConfig(String::from("constant-angle datum needs lambda != 0")));
    }
    let t2 = params.tau * params.tau;
    let (s, c) = alpha.sin_cos();
    let cot = c / s;
    let e1_lambda = -(lambda * lambda * cot + params.kappa * c * s + 4.0 * t2 * cot * c * c);
    let e2_lambda = 2.0 * params.tau * e1_lambda / (3.0 * lambda);
    let datum = FrameDatum {
        alpha,
        lambda,
        e1_alpha: 0.0,
        e2_alpha: 0.0,
        e1_lambda,
        e2_lambda,
        e1_e1_alpha: 0.0,
        e2_e1_alpha: 0.0,
        e1_e2_alpha: 0.0,
        e2_e2_alpha: 0.0,
    };
    debug_assert!(codazzi_system(params, &datum).1.abs() < 1e-9 * (1.0 + e1_lambda.abs()));
    Ok(datum)
}
