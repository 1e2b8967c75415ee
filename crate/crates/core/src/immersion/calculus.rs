//! Finite-difference calculus of fields defined over a chart.

use nalgebra::{Matrix2, Vector2, Vector3};

use super::{shape_operator, surface_jet, ParametricSurface, ShapeBasis, SurfaceJet};
use crate::ambient::{christoffel_raw, contract, BcvParams, ConnectionMode, TangentVector};
use crate::error::{Error, Result};

/// Arc-length step for first derivatives of derived surface fields.
pub const SURFACE_STEP: f64 = 1e-4;

/// Arc-length step of the outer difference in the divergence-form Laplacian.
pub const LAPLACIAN_STEP: f64 = 1e-3;

/// A real function over the parameter domain of a chart.
pub trait ScalarField {
    fn value(&self, u: f64, v: f64) -> Result<f64>;
}

impl<F: ?Sized> ScalarField for F
where
    F: Fn(f64, f64) -> Result<f64>,
{
    fn value(&self, u: f64, v: f64) -> Result<f64> {
        let x = self(u, v)?;
        if x.is_finite() {
            Ok(x)
        } else {
            Err(Error::NonFinite)
        }
    }
}

/// Derivative of `field` along the tangent direction `dir` (coordinate
/// components at the jet point), by a central difference along the
/// parameter-space line through `(u, v)` with arc-length step `step`.
pub fn directional_step<S: ScalarField + ?Sized>(
    field: &S,
    jet: &SurfaceJet,
    params: &BcvParams,
    dir: &Vector3<f64>,
    step: f64,
) -> Result<f64> {
    let c = jet.coefficients(params, dir);
    let len = params
        .metric_raw(&jet.point.coords(), dir, dir)
        .max(0.0)
        .sqrt();
    if len == 0.0 {
        return Ok(0.0);
    }
    let h = step / len;
    let plus = field.value(jet.u + h * c.x, jet.v + h * c.y)?;
    let minus = field.value(jet.u - h * c.x, jet.v - h * c.y)?;
    Ok((plus - minus) / (2.0 * h))
}

/// `X(φ)` for a tangent vector `X` at the jet point.
pub fn directional_derivative<S: ScalarField + ?Sized>(
    field: &S,
    jet: &SurfaceJet,
    params: &BcvParams,
    dir: &TangentVector,
) -> Result<f64> {
    directional_step(field, jet, params, &dir.comps, SURFACE_STEP)
}

fn parameter_partials<S: ScalarField + ?Sized>(
    field: &S,
    first_form: &Matrix2<f64>,
    u: f64,
    v: f64,
    step: f64,
) -> Result<Vector2<f64>> {
    let hu = step / first_form[(0, 0)].sqrt();
    let hv = step / first_form[(1, 1)].sqrt();
    Ok(Vector2::new(
        (field.value(u + hu, v)? - field.value(u - hu, v)?) / (2.0 * hu),
        (field.value(u, v + hv)? - field.value(u, v - hv)?) / (2.0 * hv),
    ))
}

fn first_form_at(surface: &ParametricSurface, params: &BcvParams, u: f64, v: f64) -> Result<Matrix2<f64>> {
    let p = surface.point(params, u, v)?.coords();
    let [xu, xv] = surface.partials(u, v)?;
    let fu = params.frame_comps_raw(&p, &xu);
    let fv = params.frame_comps_raw(&p, &xv);
    Ok(Matrix2::new(fu.dot(&fu), fu.dot(&fv), fv.dot(&fu), fv.dot(&fv)))
}

/// Surface gradient `grad φ = I⁻¹ (φ_u, φ_v)` expressed on `(X_u, X_v)`.
pub fn surface_gradient<S: ScalarField + ?Sized>(
    field: &S,
    surface: &ParametricSurface,
    params: &BcvParams,
    u: f64,
    v: f64,
) -> Result<TangentVector> {
    let jet = surface_jet(surface, params, u, v)?;
    let d = parameter_partials(field, &jet.first_form, u, v, SURFACE_STEP)?;
    Ok(jet.vector(jet.combine(&(jet.first_form_inverse() * d))))
}

/// Laplacian with the sign convention `Δ = −div ∘ grad`, evaluated in
/// divergence form `−(1/√|I|) ∂_i (√|I| I^{ij} ∂_j φ)`.
pub fn surface_laplacian<S: ScalarField + ?Sized>(
    field: &S,
    surface: &ParametricSurface,
    params: &BcvParams,
    u: f64,
    v: f64,
) -> Result<f64> {
    let flux = |a: f64, b: f64| -> Result<Vector2<f64>> {
        let form = first_form_at(surface, params, a, b)?;
        let det = form.determinant();
        let inv = form.try_inverse().ok_or(Error::DegenerateChart { u: a, v: b, gram: det })?;
        let d = parameter_partials(field, &form, a, b, SURFACE_STEP)?;
        Ok(inv * d * det.sqrt())
    };
    let form = first_form_at(surface, params, u, v)?;
    let hu = LAPLACIAN_STEP / form[(0, 0)].sqrt();
    let hv = LAPLACIAN_STEP / form[(1, 1)].sqrt();
    let div = (flux(u + hu, v)?.x - flux(u - hu, v)?.x) / (2.0 * hu)
        + (flux(u, v + hv)?.y - flux(u, v - hv)?.y) / (2.0 * hv);
    Ok(-div / form.determinant().sqrt())
}

/// `∇̄_X Y` for a vector field `Y` given over the chart (coordinate
/// components), with `X` tangent at the jet point.
pub(crate) fn ambient_derivative_along<Y>(
    field: Y,
    jet: &SurfaceJet,
    params: &BcvParams,
    dir: &Vector3<f64>,
) -> Result<Vector3<f64>>
where
    Y: Fn(f64, f64) -> Result<Vector3<f64>>,
{
    let c = jet.coefficients(params, dir);
    let len = params
        .metric_raw(&jet.point.coords(), dir, dir)
        .max(0.0)
        .sqrt();
    let here = field(jet.u, jet.v)?;
    let gamma = christoffel_raw(params, &jet.point.coords(), ConnectionMode::Exact)?;
    if len == 0.0 {
        return Ok(Vector3::zeros());
    }
    let h = SURFACE_STEP / len;
    let plus = field(jet.u + h * c.x, jet.v + h * c.y)?;
    let minus = field(jet.u - h * c.x, jet.v - h * c.y)?;
    Ok((plus - minus) / (2.0 * h) + contract(&gamma, dir, &here))
}

/// `λ = A(e2, e2)` as a field over the chart.
pub(crate) fn lambda_field<'a>(
    surface: &'a ParametricSurface,
    params: &'a BcvParams,
) -> impl Fn(f64, f64) -> Result<f64> + 'a {
    move |u, v| {
        let shape = shape_operator(surface, params, u, v)?;
        match shape.basis {
            ShapeBasis::Adapted => Ok(shape.lambda),
            ShapeBasis::Orthonormal => {
                let jet = surface_jet(surface, params, u, v)?;
                Err(Error::DegenerateFrame { u, v, sin_alpha: jet.sin_alpha })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::immersion::ParamDomain;

    fn flat() -> (ParametricSurface, BcvParams) {
        (
            ParametricSurface::from_fn(|u, v| Vector3::new(u, v, 0.0), ParamDomain::new((-1.0, 1.0), (-1.0, 1.0))),
            BcvParams::new(0.0, 0.0).unwrap(),
        )
    }

    #[test]
    fn constant_field_has_no_gradient_or_laplacian() {
        let (s, p) = flat();
        let c = |_: f64, _: f64| Ok(3.5);
        assert!(p.norm(&surface_gradient(&c, &s, &p, 0.2, 0.1).unwrap()) < 1e-12);
        assert!(surface_laplacian(&c, &s, &p, 0.2, 0.1).unwrap().abs() < 1e-9);
    }

    #[test]
    fn coordinate_gradient() {
        let (s, p) = flat();
        let f = |u: f64, _: f64| Ok(u);
        let g = surface_gradient(&f, &s, &p, 0.3, -0.4).unwrap();
        assert!((g.comps - Vector3::x()).amax() < 1e-10);
    }

    #[test]
    fn laplacian_sign_convention() {
        let (s, p) = flat();
        let f = |u: f64, v: f64| Ok(u * u + v * v);
        let lap = surface_laplacian(&f, &s, &p, 0.3, -0.2).unwrap();
        assert!((lap + 4.0).abs() < 1e-6, "{lap}");
    }

    #[test]
    fn non_finite_field_values_are_rejected() {
        let (s, p) = flat();
        let f = |_: f64, _: f64| Ok(f64::NAN);
        assert_eq!(surface_gradient(&f, &s, &p, 0.0, 0.0), Err(Error::NonFinite));
    }
}
