//! Shape operator `A X = −(∇̄_X N)^⊤` and mean curvature `f = trace A`.

use nalgebra::{Matrix2, Vector2, Vector3};

use super::{surface_jet, ParametricSurface, ScalarField, SurfaceJet};
use crate::ambient::{christoffel_raw, contract, BcvParams, ConnectionMode, TangentVector, FD_STEP_FIRST};
use crate::error::Result;

/// Which orthonormal tangent basis a [`ShapeData`] matrix is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeBasis {
    /// `{e1, e2}`; requires `sin α > ε_α`.
    Adapted,
    /// Gram-Schmidt of `(X_u, X_v)`, used where the adapted frame is absent.
    Orthonormal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeData {
    pub basis: ShapeBasis,
    /// `A(b_i, b_j)` in the chosen orthonormal basis `b`.
    pub matrix: Matrix2<f64>,
    /// `A(b_2, b_2)`; equals `λ = A(e2, e2)` in the adapted basis.
    pub lambda: f64,
    pub f: f64,
    /// The mixed tensor on `(X_u, X_v)`: column `j` holds the coefficients of `A X_j`.
    pub operator: Matrix2<f64>,
    pub basis_vectors: [TangentVector; 2],
}

impl ShapeData {
    /// `A w` for a tangent vector `w` at the jet point.
    pub fn apply(&self, jet: &SurfaceJet, params: &BcvParams, w: &Vector3<f64>) -> Vector3<f64> {
        jet.combine(&(self.operator * jet.coefficients(params, w)))
    }

    /// `|A|² = trace(A²)`.
    pub fn norm_squared(&self) -> f64 {
        self.matrix.iter().map(|a| a * a).sum()
    }

    pub fn determinant(&self) -> f64 {
        self.operator.determinant()
    }

    pub fn asymmetry(&self) -> f64 {
        (self.matrix[(0, 1)] - self.matrix[(1, 0)]).abs()
    }
}

fn basis_for(jet: &SurfaceJet, params: &BcvParams) -> (ShapeBasis, [TangentVector; 2]) {
    if let Some(frame) = jet.adapted {
        return (ShapeBasis::Adapted, [frame.e1, frame.e2]);
    }
    let p = jet.point.coords();
    let xu = jet.xu.comps;
    let b1 = xu / params.metric_raw(&p, &xu, &xu).sqrt();
    let mut b2 = jet.xv.comps - b1 * params.metric_raw(&p, &jet.xv.comps, &b1);
    b2 /= params.metric_raw(&p, &b2, &b2).sqrt();
    (ShapeBasis::Orthonormal, [jet.vector(b1), jet.vector(b2)])
}

fn assemble(jet: &SurfaceJet, params: &BcvParams, operator: Matrix2<f64>) -> ShapeData {
    let (basis, vectors) = basis_for(jet, params);
    let p = jet.point.coords();
    let images = vectors.map(|b| jet.combine(&(operator * jet.coefficients(params, &b.comps))));
    let matrix = Matrix2::from_fn(|i, j| params.metric_raw(&p, &images[i], &vectors[j].comps));
    ShapeData {
        basis,
        matrix,
        lambda: matrix[(1, 1)],
        f: operator.trace(),
        operator,
        basis_vectors: vectors,
    }
}

pub(crate) fn shape_from_jet(surface: &ParametricSurface, params: &BcvParams, jet: &SurfaceJet) -> Result<ShapeData> {
    // g(A X_i, X_j) = g(∇̄_{X_i} X_j, N) = g(X_ij + Γ(X_i, X_j), N)
    let p = jet.point.coords();
    let gamma = christoffel_raw(params, &p, ConnectionMode::Exact)?;
    let [xuu, xuv, xvv] = surface.second_partials(jet.u, jet.v)?;
    let (xu, xv, n) = (jet.xu.comps, jet.xv.comps, jet.normal.comps);
    let h = |second: &Vector3<f64>, a: &Vector3<f64>, b: &Vector3<f64>| {
        params.metric_raw(&p, &(second + contract(&gamma, a, b)), &n)
    };
    let huv = 0.5 * (h(&xuv, &xu, &xv) + h(&xuv, &xv, &xu));
    let second_form = Matrix2::new(h(&xuu, &xu, &xu), huv, huv, h(&xvv, &xv, &xv));
    Ok(assemble(jet, params, jet.first_form_inverse() * second_form))
}

/// Shape operator at `(u, v)` from the second fundamental form.
///
/// The matrix is written in `{e1, e2}` when the adapted frame exists and in
/// an orthonormalized chart basis otherwise.
pub fn shape_operator(surface: &ParametricSurface, params: &BcvParams, u: f64, v: f64) -> Result<ShapeData> {
    let jet = surface_jet(surface, params, u, v)?;
    shape_from_jet(surface, params, &jet)
}

/// Shape operator from central differences of the unit normal along the
/// coordinate directions, `A X_j = −(∂_j N + Γ(X_j, N))^⊤`.
///
/// Independent of the chart's second partials; the matrix is not
/// symmetrized.
pub fn shape_operator_normal_fd(surface: &ParametricSurface, params: &BcvParams, u: f64, v: f64) -> Result<ShapeData> {
    let jet = surface_jet(surface, params, u, v)?;
    let p = jet.point.coords();
    let gamma = christoffel_raw(params, &p, ConnectionMode::Exact)?;
    let normal = |a: f64, b: f64| -> Result<Vector3<f64>> { Ok(surface_jet(surface, params, a, b)?.normal.comps) };
    let hu = FD_STEP_FIRST * u.abs().max(1.0);
    let hv = FD_STEP_FIRST * v.abs().max(1.0);
    let du = (normal(u + hu, v)? - normal(u - hu, v)?) / (2.0 * hu);
    let dv = (normal(u, v + hv)? - normal(u, v - hv)?) / (2.0 * hv);
    let n = jet.normal.comps;
    let image = |d: Vector3<f64>, x: &Vector3<f64>| -> Vector2<f64> {
        let cov = d + contract(&gamma, x, &n);
        jet.coefficients(params, &(-jet.tangent_part(params, &cov)))
    };
    let cu = image(du, &jet.xu.comps);
    let cv = image(dv, &jet.xv.comps);
    Ok(assemble(&jet, params, Matrix2::from_columns(&[cu, cv])))
}

pub fn mean_curvature(surface: &ParametricSurface, params: &BcvParams, u: f64, v: f64) -> Result<f64> {
    Ok(shape_operator(surface, params, u, v)?.f)
}

/// `f = trace A` as a [`ScalarField`] over the chart.
#[derive(Debug, Clone, Copy)]
pub struct MeanCurvatureField<'a> {
    pub surface: &'a ParametricSurface,
    pub params: &'a BcvParams,
}

impl ScalarField for MeanCurvatureField<'_> {
    fn value(&self, u: f64, v: f64) -> Result<f64> {
        mean_curvature(self.surface, self.params, u, v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::immersion::ParamDomain;

    #[test]
    fn plane_is_totally_geodesic() {
        let p = BcvParams::new(0.0, 0.0).unwrap();
        let s = ParametricSurface::from_fn(|u, v| Vector3::new(u, v, 0.0), ParamDomain::new((-1.0, 1.0), (-1.0, 1.0)));
        let a = shape_operator(&s, &p, 0.1, 0.2).unwrap();
        assert_eq!(a.basis, ShapeBasis::Orthonormal);
        assert!(a.matrix.amax() < 1e-8);
        assert!(a.f.abs() < 1e-8);
    }

    #[test]
    fn paraboloid_matches_normal_derivative_route() {
        let p = BcvParams::new(1.0, 0.4).unwrap();
        let s = ParametricSurface::from_fn(
            |u, v| Vector3::new(u, v, 0.5 * u * u - 0.3 * v * v + 0.2 * u * v),
            ParamDomain::new((-0.5, 0.5), (-0.5, 0.5)),
        );
        let a = shape_operator(&s, &p, 0.2, -0.1).unwrap();
        let b = shape_operator_normal_fd(&s, &p, 0.2, -0.1).unwrap();
        assert!((a.matrix - b.matrix).amax() < 1e-5, "{} vs {}", a.matrix, b.matrix);
        assert!(b.asymmetry() < 1e-6);
        assert!((a.f - b.f).abs() < 1e-5);
    }
}
