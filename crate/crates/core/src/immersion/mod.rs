//! Extrinsic and intrinsic data of parametric surfaces immersed in `N_{κ,τ}`.
//!
//! A surface is a [`Chart`] `(u, v) ↦ (x, y, z)` over a parameter rectangle.
//! At each parameter value a [`SurfaceJet`] collects the unit normal
//! `N = X_u ∧ X_v / |X_u ∧ X_v|` (optionally negated per surface), the angle
//! function `cos α = g(E3, N)`, the tangent part `T` of `E3`, `JT = N ∧ T` and
//! the adapted frame `e1 = T / sin α`, `e2 = JT / sin α`.

mod calculus;
mod residuals;
mod shape;

use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix2, Vector2, Vector3};

use crate::ambient::{AmbientPoint, BcvParams, TangentVector, FD_STEP_FIRST, FD_STEP_SECOND};
use crate::error::{Error, Result};

pub use calculus::{
    directional_derivative, surface_gradient, surface_laplacian, ScalarField,
};
pub use residuals::{
    adapted_connection_residual, codazzi_residual, codazzi_system, compatibility_residual,
    frame_datum, gauss_residual, intrinsic_curvature, FrameDatum,
};
pub use shape::{
    mean_curvature, shape_operator, shape_operator_normal_fd, MeanCurvatureField, ShapeBasis,
    ShapeData,
};


/// Below this value of `sin α` the adapted frame is reported absent.
pub const EPS_ALPHA: f64 = 1e-7;

/// Minimum Gram determinant of the first fundamental form.
pub const GRAM_EPS: f64 = 1e-12;

/// A map from a parameter rectangle into Cartesian coordinates.
///
/// Charts may supply analytic first and second partials; anything they do
/// not supply is obtained by central differences of [`Chart::point`].
pub trait Chart: Send + Sync {
    fn point(&self, u: f64, v: f64) -> Result<Vector3<f64>>;

    /// `[X_u, X_v]`.
    fn partials(&self, _u: f64, _v: f64) -> Result<Option<[Vector3<f64>; 2]>> {
        Ok(None)
    }

    /// `[X_uu, X_uv, X_vv]`.
    fn second_partials(&self, _u: f64, _v: f64) -> Result<Option<[Vector3<f64>; 3]>> {
        Ok(None)
    }
}

/// Chart backed by a closure, without analytic partials.
pub struct FnChart<F>(pub F);

impl<F> Chart for FnChart<F>
where
    F: Fn(f64, f64) -> Vector3<f64> + Send + Sync,
{
    fn point(&self, u: f64, v: f64) -> Result<Vector3<f64>> {
        Ok((self.0)(u, v))
    }
}

/// Closed parameter rectangle `[u0, u1] × [v0, v1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamDomain {
    pub u: (f64, f64),
    pub v: (f64, f64),
}

impl ParamDomain {
    pub fn new(u: (f64, f64), v: (f64, f64)) -> Self {
        Self { u, v }
    }

    pub fn contains(&self, u: f64, v: f64) -> bool {
        let slack = 1e-12;
        u >= self.u.0 - slack && u <= self.u.1 + slack && v >= self.v.0 - slack && v <= self.v.1 + slack
    }

    /// Point at fractional position `(a, b) ∈ [0, 1]²`.
    pub fn lerp(&self, a: f64, b: f64) -> (f64, f64) {
        (
            self.u.0 + a * (self.u.1 - self.u.0),
            self.v.0 + b * (self.v.1 - self.v.0),
        )
    }

    /// `nu × nv` grid including both ends of each interval, row-major in `u`.
    pub fn grid(&self, nu: usize, nv: usize) -> Vec<(f64, f64)> {
        let frac = |i: usize, n: usize| if n <= 1 { 0.5 } else { i as f64 / (n - 1) as f64 };
        (0..nu)
            .flat_map(|i| (0..nv).map(move |j| (i, j)))
            .map(|(i, j)| self.lerp(frac(i, nu), frac(j, nv)))
            .collect()
    }

    /// The rectangle shrunk by `margin` (as a fraction of each side).
    pub fn inset(&self, margin: f64) -> Self {
        let du = margin * (self.u.1 - self.u.0);
        let dv = margin * (self.v.1 - self.v.0);
        Self::new((self.u.0 + du, self.u.1 - du), (self.v.0 + dv, self.v.1 - dv))
    }
}

/// A chart together with its parameter domain and normal orientation.
#[derive(Clone)]
pub struct ParametricSurface {
    chart: Arc<dyn Chart>,
    domain: ParamDomain,
    flip_normal: bool,
    label: String,
}

impl fmt::Debug for ParametricSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParametricSurface")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("flip_normal", &self.flip_normal)
            .finish()
    }
}

impl ParametricSurface {
    pub fn new(chart: Arc<dyn Chart>, domain: ParamDomain) -> Self {
        Self {
            chart,
            domain,
            flip_normal: false,
            label: String::from("surface"),
        }
    }

    pub fn from_fn<F>(f: F, domain: ParamDomain) -> Self
    where
        F: Fn(f64, f64) -> Vector3<f64> + Send + Sync + 'static,
    {
        Self::new(Arc::new(FnChart(f)), domain)
    }

    /// Negates the normal, and with it `cos α`, `A` and `f`.
    pub fn with_flipped_normal(mut self, flip: bool) -> Self {
        self.flip_normal = flip;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn domain(&self) -> ParamDomain {
        self.domain
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn normal_flipped(&self) -> bool {
        self.flip_normal
    }

    pub fn point(&self, params: &BcvParams, u: f64, v: f64) -> Result<AmbientPoint> {
        AmbientPoint::from_coords(params, self.chart.point(u, v)?)
    }

    pub fn point_raw(&self, u: f64, v: f64) -> Result<Vector3<f64>> {
        self.chart.point(u, v)
    }

    pub fn partials(&self, u: f64, v: f64) -> Result<[Vector3<f64>; 2]> {
        if let Some(p) = self.chart.partials(u, v)? {
            return Ok(p);
        }
        let hu = FD_STEP_FIRST * u.abs().max(1.0);
        let hv = FD_STEP_FIRST * v.abs().max(1.0);
        let c = &self.chart;
        Ok([
            (c.point(u + hu, v)? - c.point(u - hu, v)?) / (2.0 * hu),
            (c.point(u, v + hv)? - c.point(u, v - hv)?) / (2.0 * hv),
        ])
    }

    pub fn second_partials(&self, u: f64, v: f64) -> Result<[Vector3<f64>; 3]> {
        if let Some(p) = self.chart.second_partials(u, v)? {
            return Ok(p);
        }
        let hu = FD_STEP_SECOND * u.abs().max(1.0);
        let hv = FD_STEP_SECOND * v.abs().max(1.0);
        let c = &self.chart;
        let mid = c.point(u, v)?;
        let uu = (c.point(u + hu, v)? - mid * 2.0 + c.point(u - hu, v)?) / (hu * hu);
        let vv = (c.point(u, v + hv)? - mid * 2.0 + c.point(u, v - hv)?) / (hv * hv);
        let uv = (c.point(u + hu, v + hv)? - c.point(u + hu, v - hv)? - c.point(u - hu, v + hv)?
            + c.point(u - hu, v - hv)?)
            / (4.0 * hu * hv);
        Ok([uu, uv, vv])
    }
}

/// `e1 = T / sin α`, `e2 = JT / sin α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptedFrame {
    pub e1: TangentVector,
    pub e2: TangentVector,
}

/// First-order geometric data of a surface at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceJet {
    pub u: f64,
    pub v: f64,
    pub point: AmbientPoint,
    pub xu: TangentVector,
    pub xv: TangentVector,
    pub first_form: Matrix2<f64>,
    pub normal: TangentVector,
    pub cos_alpha: f64,
    pub sin_alpha: f64,
    pub t: TangentVector,
    pub jt: TangentVector,
    pub adapted: Option<AdaptedFrame>,
    first_form_inv: Matrix2<f64>,
    normal_frame: Vector3<f64>,
}

impl SurfaceJet {
    /// `α ∈ [0, π]`.
    pub fn alpha(&self) -> f64 {
        self.sin_alpha.atan2(self.cos_alpha)
    }

    pub fn is_degenerate(&self) -> bool {
        self.adapted.is_none()
    }

    pub fn adapted_frame(&self) -> Result<AdaptedFrame> {
        self.adapted.ok_or(Error::DegenerateFrame {
            u: self.u,
            v: self.v,
            sin_alpha: self.sin_alpha,
        })
    }

    pub fn first_form_inverse(&self) -> Matrix2<f64> {
        self.first_form_inv
    }

    /// Coefficients `(a, b)` of the tangential part of `w` in `a X_u + b X_v`.
    pub fn coefficients(&self, params: &BcvParams, w: &Vector3<f64>) -> Vector2<f64> {
        let p = self.point.coords();
        let rhs = Vector2::new(
            params.metric_raw(&p, w, &self.xu.comps),
            params.metric_raw(&p, w, &self.xv.comps),
        );
        self.first_form_inv * rhs
    }

    pub(crate) fn combine(&self, c: &Vector2<f64>) -> Vector3<f64> {
        self.xu.comps * c.x + self.xv.comps * c.y
    }

    /// Orthogonal projection of `w` onto the tangent plane.
    pub fn tangent_part(&self, params: &BcvParams, w: &Vector3<f64>) -> Vector3<f64> {
        let n = self.normal.comps;
        w - n * params.metric_raw(&self.point.coords(), w, &n)
    }

    /// `J w = N ∧ w`.
    pub fn rotate(&self, params: &BcvParams, w: &Vector3<f64>) -> Vector3<f64> {
        let p = self.point.coords();
        let wf = params.frame_comps_raw(&p, w);
        params.coords_from_frame_raw(&p, &self.normal_frame.cross(&wf))
    }

    pub(crate) fn vector(&self, comps: Vector3<f64>) -> TangentVector {
        TangentVector::at(self.point, comps)
    }

    /// Largest violation of the jet identities: `E3 = T + cos α N`
    /// (componentwise), `g(T, T) = sin²α`, `g(N, N) = 1`, `N ⟂ X_u, X_v`.
    pub fn identity_residual(&self, params: &BcvParams) -> f64 {
        let p = self.point.coords();
        let n = self.normal.comps;
        let t = self.t.comps;
        let decomposition = (Vector3::z() - t - n * self.cos_alpha).amax();
        let t_norm = (params.metric_raw(&p, &t, &t) - self.sin_alpha.powi(2)).abs();
        let unit = (params.metric_raw(&p, &n, &n) - 1.0).abs();
        let normal_u = params.metric_raw(&p, &n, &self.xu.comps).abs();
        let normal_v = params.metric_raw(&p, &n, &self.xv.comps).abs();
        decomposition.max(t_norm).max(unit).max(normal_u).max(normal_v)
    }
}

/// Evaluates the jet of `surface` at `(u, v)`.
pub fn surface_jet(
    surface: &ParametricSurface,
    params: &BcvParams,
    u: f64,
    v: f64,
) -> Result<SurfaceJet> {
    let point = surface.point(params, u, v)?;
    let p = point.coords();
    let [xu, xv] = surface.partials(u, v)?;
    let fu = params.frame_comps_raw(&p, &xu);
    let fv = params.frame_comps_raw(&p, &xv);
    let first_form = Matrix2::new(fu.dot(&fu), fu.dot(&fv), fv.dot(&fu), fv.dot(&fv));
    let gram = first_form.determinant();
    if !(gram > GRAM_EPS) {
        return Err(Error::DegenerateChart { u, v, gram });
    }
    let first_form_inv = Matrix2::new(first_form[(1, 1)], -first_form[(0, 1)], -first_form[(1, 0)], first_form[(0, 0)]) / gram;

    let mut nf = fu.cross(&fv);
    nf /= nf.norm();
    if surface.flip_normal {
        nf = -nf;
    }
    let cos_alpha = nf.z;
    let sin_alpha = nf.x.hypot(nf.y);
    let tf = Vector3::z() - nf * cos_alpha;
    let jtf = nf.cross(&tf);

    let at = |c: Vector3<f64>| TangentVector::at(point, params.coords_from_frame_raw(&p, &c));
    let t = at(tf);
    let jt = at(jtf);
    let adapted = (sin_alpha > EPS_ALPHA).then(|| AdaptedFrame {
        e1: at(tf / sin_alpha),
        e2: at(jtf / sin_alpha),
    });

    Ok(SurfaceJet {
        u,
        v,
        point,
        xu: TangentVector::at(point, xu),
        xv: TangentVector::at(point, xv),
        first_form,
        normal: at(nf),
        cos_alpha,
        sin_alpha,
        t,
        jt,
        adapted,
        first_form_inv,
        normal_frame: nf,
    })
}
