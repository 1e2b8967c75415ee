//! Hopf tubes: preimages `ψ⁻¹(γ)` of base curves under the Hopf fibration,
//! charted as `(v, t) ↦ (x(v), y(v), t)`.

use std::f64::consts::TAU;
use std::sync::Arc;

use nalgebra::{Vector2, Vector3};

use super::spline::CubicSpline;
use crate::ambient::BcvParams;
use crate::error::{Error, Result};
use crate::immersion::{Chart, ParamDomain, ParametricSurface};

/// A plane curve `v ↦ (x, y)` in the base of the fibration.
pub trait BaseCurve: Send + Sync {
    /// `(γ, γ', γ'')` at `v`.
    fn jet(&self, v: f64) -> Result<[Vector2<f64>; 3]>;

    fn v_range(&self) -> (f64, f64);
}

/// Euclidean circle of radius `r₀` about the origin, counter-clockwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub radius: f64,
}

impl BaseCurve for Circle {
    fn jet(&self, v: f64) -> Result<[Vector2<f64>; 3]> {
        let (s, c) = v.sin_cos();
        let r = self.radius;
        Ok([Vector2::new(r * c, r * s), Vector2::new(-r * s, r * c), Vector2::new(-r * c, -r * s)])
    }

    fn v_range(&self) -> (f64, f64) {
        (0.0, TAU)
    }
}

/// Axis-aligned ellipse with semi-axes `a`, `b`, counter-clockwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipse {
    pub a: f64,
    pub b: f64,
}

impl BaseCurve for Ellipse {
    fn jet(&self, v: f64) -> Result<[Vector2<f64>; 3]> {
        let (s, c) = v.sin_cos();
        let (a, b) = (self.a, self.b);
        Ok([Vector2::new(a * c, b * s), Vector2::new(-a * s, b * c), Vector2::new(-a * c, -b * s)])
    }

    fn v_range(&self) -> (f64, f64) {
        (0.0, TAU)
    }
}

/// The segment `v (cos φ, sin φ)` through the origin, a geodesic of the
/// base for every `κ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialLine {
    pub angle: f64,
    pub range: (f64, f64),
}

impl BaseCurve for RadialLine {
    fn jet(&self, v: f64) -> Result<[Vector2<f64>; 3]> {
        let (s, c) = self.angle.sin_cos();
        Ok([Vector2::new(v * c, v * s), Vector2::new(c, s), Vector2::zeros()])
    }

    fn v_range(&self) -> (f64, f64) {
        self.range
    }
}

/// Spline through sampled points, parametrized by cumulative chord length.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    x: CubicSpline,
    y: CubicSpline,
}

impl SampledCurve {
    pub fn new(points: &[Vector2<f64>]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::IrregularCurve(String::from("need at least two base points")));
        }
        let mut t = Vec::with_capacity(points.len());
        let mut acc = 0.0;
        t.push(0.0);
        for w in points.windows(2) {
            let step = (w[1] - w[0]).norm();
            if !(step > 0.0) {
                return Err(Error::IrregularCurve(String::from("repeated consecutive base points")));
            }
            acc += step;
            t.push(acc);
        }
        Ok(Self {
            x: CubicSpline::new(t.clone(), points.iter().map(|p| p.x).collect())?,
            y: CubicSpline::new(t, points.iter().map(|p| p.y).collect())?,
        })
    }
}

impl BaseCurve for SampledCurve {
    fn jet(&self, v: f64) -> Result<[Vector2<f64>; 3]> {
        let (x, dx, ddx) = self.x.eval(v);
        let (y, dy, ddy) = self.y.eval(v);
        Ok([Vector2::new(x, y), Vector2::new(dx, dy), Vector2::new(ddx, ddy)])
    }

    fn v_range(&self) -> (f64, f64) {
        self.x.domain()
    }
}

/// Geodesic curvature of the base curve in `(M²(κ), (dx² + dy²)/F²)` with
/// respect to its left normal:
/// `κ_g = F κ_e + ∇F · n`, where `κ_e` is the signed Euclidean curvature,
/// `n` the Euclidean left unit normal and `∇F = (κ/2)(x, y)`.
pub fn geodesic_curvature(params: &BcvParams, curve: &dyn BaseCurve, v: f64) -> Result<f64> {
    let [p, d, dd] = curve.jet(v)?;
    let speed = d.norm();
    if !(speed > 1e-12) {
        return Err(Error::IrregularCurve(format!("zero velocity at v = {v}")));
    }
    let kappa_e = (d.x * dd.y - d.y * dd.x) / speed.powi(3);
    let n = Vector2::new(-d.y, d.x) / speed;
    let factor = params.smoothing_factor(p.x, p.y);
    Ok(factor * kappa_e + 0.5 * params.kappa * p.dot(&n))
}

struct TubeChart {
    curve: Arc<dyn BaseCurve>,
}

impl Chart for TubeChart {
    fn point(&self, v: f64, t: f64) -> Result<Vector3<f64>> {
        let [p, _, _] = self.curve.jet(v)?;
        Ok(Vector3::new(p.x, p.y, t))
    }

    fn partials(&self, v: f64, _t: f64) -> Result<Option<[Vector3<f64>; 2]>> {
        let [_, d, _] = self.curve.jet(v)?;
        Ok(Some([Vector3::new(d.x, d.y, 0.0), Vector3::z()]))
    }

    fn second_partials(&self, v: f64, _t: f64) -> Result<Option<[Vector3<f64>; 3]>> {
        let [_, _, dd] = self.curve.jet(v)?;
        Ok(Some([Vector3::new(dd.x, dd.y, 0.0), Vector3::zeros(), Vector3::zeros()]))
    }
}

/// The Hopf tube over `curve` for heights `t ∈ t_range`.
///
/// The normal is the horizontal lift of the left normal of the base curve,
/// so that the mean curvature equals [`geodesic_curvature`].
pub fn hopf_tube(params: &BcvParams, curve: Arc<dyn BaseCurve>, t_range: (f64, f64)) -> Result<ParametricSurface> {
    let range = curve.v_range();
    for k in 0..=64 {
        let v = range.0 + (range.1 - range.0) * k as f64 / 64.0;
        let [p, d, _] = curve.jet(v)?;
        if !(d.norm() > 1e-12) {
            return Err(Error::IrregularCurve(format!("zero velocity at v = {v}")));
        }
        crate::ambient::AmbientPoint::new(params, p.x, p.y, t_range.0)?;
    }
    let domain = ParamDomain::new(range, t_range);
    Ok(ParametricSurface::new(Arc::new(TubeChart { curve }), domain)
        .with_flipped_normal(true)
        .with_label("hopf-tube"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::immersion::{shape_operator, surface_jet};

    #[test]
    fn circle_geodesic_curvature() {
        for kappa in [0.0, 1.0, -0.5] {
            let p = BcvParams::new(kappa, 0.3).unwrap();
            let k = geodesic_curvature(&p, &Circle { radius: 0.8 }, 1.0).unwrap();
            assert!((k - (1.0 / 0.8 - kappa * 0.8 / 4.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn tube_mean_curvature_is_geodesic_curvature() {
        let p = BcvParams::new(0.6, 0.5).unwrap();
        let curve = Arc::new(Ellipse { a: 1.0, b: 0.6 });
        let s = hopf_tube(&p, curve.clone(), (-1.0, 1.0)).unwrap();
        for v in [0.0, 0.7, 2.0, 4.5] {
            let jet = surface_jet(&s, &p, v, 0.3).unwrap();
            assert!(jet.cos_alpha.abs() < 1e-14);
            let f = shape_operator(&s, &p, v, 0.3).unwrap().f;
            let kg = geodesic_curvature(&p, curve.as_ref(), v).unwrap();
            assert!((f - kg).abs() < 1e-10, "{v}: {f} vs {kg}");
        }
    }

    #[test]
    fn radial_tube_is_minimal() {
        let p = BcvParams::new(1.0, 0.5).unwrap();
        let s = hopf_tube(&p, Arc::new(RadialLine { angle: 0.4, range: (-1.0, 1.0) }), (0.0, 1.0)).unwrap();
        assert!(shape_operator(&s, &p, 0.3, 0.5).unwrap().f.abs() < 1e-12);
    }

    #[test]
    fn degenerate_curves_are_rejected() {
        let p = BcvParams::new(0.0, 0.5).unwrap();
        assert!(hopf_tube(&p, Arc::new(Circle { radius: 0.0 }), (0.0, 1.0)).is_err());
        assert!(SampledCurve::new(&[Vector2::new(0.0, 0.0), Vector2::new(0.0, 0.0)]).is_err());
    }
}
