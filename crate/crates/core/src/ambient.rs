//! The ambient BCV space `N_{κ,τ}`: metric, orthonormal frame, Levi-Civita
//! connection, Ricci tensor, classification and the Hopf fibration.
//!
//! Points live in Cartesian coordinates `(x, y, z)` on the open set
//! `F(x, y) = 1 + κ/4 (x² + y²) > 0`, with
//!
//! ```text
//! g = (dx² + dy²) / F² + (dz + τ (y dx − x dy) / F)²
//! ```
//!
//! Tangent vectors are stored by their components in the coordinate basis
//! `(∂x, ∂y, ∂z)`. The frame `(E1, E2, E3)` is declared positively oriented.

use std::fmt;

use nalgebra::{Matrix3, Vector2, Vector3};

use crate::error::{Error, Result};

/// Points with `F <= DOMAIN_EPS` are rejected.
pub const DOMAIN_EPS: f64 = 1e-9;

/// Threshold for `|κ − 4τ²|` below which the space is a space form.
pub const SPACE_FORM_EPS: f64 = 1e-12;

/// Relative step for first-order central differences.
pub const FD_STEP_FIRST: f64 = 1e-5;

/// Relative step for second-order central differences.
pub const FD_STEP_SECOND: f64 = 1e-4;

/// Christoffel symbols in coordinates: `gamma[k][(i, j)] = Γ^k_ij`.
pub type Christoffel = [Matrix3<f64>; 3];

/// The pair `(κ, τ)` selecting the ambient geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BcvParams {
    pub kappa: f64,
    pub tau: f64,
}

/// Homogeneous model realized by a parameter pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeometryClass {
    Euclidean,
    SphereMinusPoint,
    SphereTimesLine,
    HyperbolicTimesLine,
    SU2MinusPoint,
    SL2RCover,
    Nil3,
}

impl GeometryClass {
    pub fn name(self) -> &'static str {
        match self {
            GeometryClass::Euclidean => "Euclidean",
            GeometryClass::SphereMinusPoint => "SphereMinusPoint",
            GeometryClass::SphereTimesLine => "SphereTimesLine",
            GeometryClass::HyperbolicTimesLine => "HyperbolicTimesLine",
            GeometryClass::SU2MinusPoint => "SU2MinusPoint",
            GeometryClass::SL2RCover => "SL2RCover",
            GeometryClass::Nil3 => "Nil3",
        }
    }
}

impl fmt::Display for GeometryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How Christoffel symbols are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConnectionMode {
    /// Koszul formula with central-difference metric derivatives.
    #[default]
    FiniteDifference,
    /// Koszul formula with the metric derivatives differentiated in closed form.
    Exact,
}

/// A point of `N_{κ,τ}` in Cartesian coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmbientPoint {
    coords: Vector3<f64>,
}

impl AmbientPoint {
    pub fn new(params: &BcvParams, x: f64, y: f64, z: f64) -> Result<Self> {
        Self::from_coords(params, Vector3::new(x, y, z))
    }

    pub fn from_coords(params: &BcvParams, coords: Vector3<f64>) -> Result<Self> {
        if !coords.iter().all(|c| c.is_finite()) {
            return Err(Error::NonFinite);
        }
        let factor = params.smoothing_factor(coords.x, coords.y);
        if factor <= DOMAIN_EPS {
            return Err(Error::OutOfDomain {
                x: coords.x,
                y: coords.y,
                z: coords.z,
                factor,
            });
        }
        Ok(Self { coords })
    }

    pub fn coords(&self) -> Vector3<f64> {
        self.coords
    }

    pub fn x(&self) -> f64 {
        self.coords.x
    }

    pub fn y(&self) -> f64 {
        self.coords.y
    }

    pub fn z(&self) -> f64 {
        self.coords.z
    }
}

/// A vector at `base`, in the coordinate basis `(∂x, ∂y, ∂z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentVector {
    pub base: AmbientPoint,
    pub comps: Vector3<f64>,
}

impl TangentVector {
    pub fn new(base: AmbientPoint, comps: Vector3<f64>) -> Result<Self> {
        if !comps.iter().all(|c| c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { base, comps })
    }

    pub(crate) fn at(base: AmbientPoint, comps: Vector3<f64>) -> Self {
        Self { base, comps }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::at(self.base, self.comps * s)
    }

    pub fn try_add(&self, other: &TangentVector) -> Result<Self> {
        same_base(self, other)?;
        Ok(Self::at(self.base, self.comps + other.comps))
    }

    pub fn try_sub(&self, other: &TangentVector) -> Result<Self> {
        same_base(self, other)?;
        Ok(Self::at(self.base, self.comps - other.comps))
    }
}

fn same_base(a: &TangentVector, b: &TangentVector) -> Result<()> {
    if a.base == b.base {
        Ok(())
    } else {
        Err(Error::BaseMismatch)
    }
}

impl BcvParams {
    pub fn new(kappa: f64, tau: f64) -> Result<Self> {
        if !kappa.is_finite() || !tau.is_finite() {
            return Err(Error::InvalidParams { kappa, tau });
        }
        Ok(Self { kappa, tau })
    }

    /// `F(x, y) = 1 + κ/4 (x² + y²)`.
    pub fn smoothing_factor(&self, x: f64, y: f64) -> f64 {
        1.0 + 0.25 * self.kappa * (x * x + y * y)
    }

    pub fn is_space_form(&self) -> bool {
        (self.kappa - 4.0 * self.tau * self.tau).abs() < SPACE_FORM_EPS
    }

    /// `4τ² − κ`, the factor that vanishes exactly on space forms.
    pub fn space_form_defect(&self) -> f64 {
        4.0 * self.tau * self.tau - self.kappa
    }

    pub fn classify(&self) -> GeometryClass {
        let kappa_zero = self.kappa.abs() < SPACE_FORM_EPS;
        let tau_zero = self.tau.abs() < SPACE_FORM_EPS;
        if self.is_space_form() {
            return if kappa_zero {
                GeometryClass::Euclidean
            } else {
                GeometryClass::SphereMinusPoint
            };
        }
        match (kappa_zero, self.kappa > 0.0, tau_zero) {
            (true, _, _) => GeometryClass::Nil3,
            (false, true, true) => GeometryClass::SphereTimesLine,
            (false, false, true) => GeometryClass::HyperbolicTimesLine,
            (false, true, false) => GeometryClass::SU2MinusPoint,
            (false, false, false) => GeometryClass::SL2RCover,
        }
    }

    /// Radius of the largest open disk `x² + y² < R²` inside the domain,
    /// `None` when the domain is all of `R³`.
    pub fn domain_radius(&self) -> Option<f64> {
        (self.kappa < 0.0).then(|| (4.0 / -self.kappa).sqrt())
    }

    /// Coordinate matrix of `g` at `p`.
    pub fn metric_matrix(&self, p: &AmbientPoint) -> Matrix3<f64> {
        metric_matrix_raw(self, &p.coords)
    }

    pub fn metric(&self, a: &TangentVector, b: &TangentVector) -> Result<f64> {
        same_base(a, b)?;
        Ok(self.metric_raw(&a.base.coords, &a.comps, &b.comps))
    }

    pub fn norm(&self, v: &TangentVector) -> f64 {
        self.metric_raw(&v.base.coords, &v.comps, &v.comps)
            .max(0.0)
            .sqrt()
    }

    /// `g(a, b)` for raw coordinate components at `p`.
    pub(crate) fn metric_raw(&self, p: &Vector3<f64>, a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
        // Frame components are orthonormal coordinates, which avoids forming G.
        self.frame_comps_raw(p, a).dot(&self.frame_comps_raw(p, b))
    }

    /// Columns are the coordinate components of `E1, E2, E3`.
    pub fn frame_matrix(&self, p: &AmbientPoint) -> Matrix3<f64> {
        frame_matrix_raw(self, &p.coords)
    }

    pub fn frame(&self, p: &AmbientPoint) -> [TangentVector; 3] {
        let m = self.frame_matrix(p);
        [0, 1, 2].map(|i| TangentVector::at(*p, m.column(i).into_owned()))
    }

    /// Components of `v` in the frame `(E1, E2, E3)`.
    pub fn to_frame(&self, v: &TangentVector) -> Vector3<f64> {
        self.frame_comps_raw(&v.base.coords, &v.comps)
    }

    pub(crate) fn frame_comps_raw(&self, p: &Vector3<f64>, v: &Vector3<f64>) -> Vector3<f64> {
        let f = self.smoothing_factor(p.x, p.y);
        Vector3::new(
            v.x / f,
            v.y / f,
            v.z + self.tau * (p.y * v.x - p.x * v.y) / f,
        )
    }

    pub fn from_frame(&self, p: &AmbientPoint, frame_comps: &Vector3<f64>) -> TangentVector {
        TangentVector::at(*p, self.coords_from_frame_raw(&p.coords, frame_comps))
    }

    pub(crate) fn coords_from_frame_raw(&self, p: &Vector3<f64>, c: &Vector3<f64>) -> Vector3<f64> {
        frame_matrix_raw(self, p) * c
    }

    /// Ricci eigenvalues on the frame: `(κ − 2τ², κ − 2τ², 2τ²)`.
    pub fn ricci_frame_diagonal(&self) -> Vector3<f64> {
        let t2 = self.tau * self.tau;
        Vector3::new(self.kappa - 2.0 * t2, self.kappa - 2.0 * t2, 2.0 * t2)
    }

    /// Closed-form Ricci tensor, extended bilinearly from its frame values.
    pub fn ricci(&self, a: &TangentVector, b: &TangentVector) -> Result<f64> {
        same_base(a, b)?;
        Ok(self.ricci_raw(&a.base.coords, &a.comps, &b.comps))
    }

    pub(crate) fn ricci_raw(&self, p: &Vector3<f64>, a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
        let fa = self.frame_comps_raw(p, a);
        let fb = self.frame_comps_raw(p, b);
        fa.component_mul(&fb).dot(&self.ricci_frame_diagonal())
    }

    /// Hopf projection `ψ(x, y, z) = (x, y)`.
    pub fn hopf_project(&self, p: &AmbientPoint) -> Vector2<f64> {
        Vector2::new(p.x(), p.y())
    }

    /// `dψ(v)`: the vertical component is dropped.
    pub fn hopf_differential(&self, v: &TangentVector) -> Vector2<f64> {
        Vector2::new(v.comps.x, v.comps.y)
    }

    /// Norm of a base vector `w` at `q` in `h = (dx² + dy²) / F²`.
    pub fn base_norm(&self, q: &Vector2<f64>, w: &Vector2<f64>) -> f64 {
        w.norm() / self.smoothing_factor(q.x, q.y)
    }
}

fn frame_matrix_raw(params: &BcvParams, p: &Vector3<f64>) -> Matrix3<f64> {
    let f = params.smoothing_factor(p.x, p.y);
    let t = params.tau;
    Matrix3::new(
        f, 0.0, 0.0, //
        0.0, f, 0.0, //
        -t * p.y, t * p.x, 1.0,
    )
}

/// `G = diag(1/F², 1/F², 0) + w wᵀ` with `w = (τy/F, −τx/F, 1)`.
fn metric_matrix_raw(params: &BcvParams, p: &Vector3<f64>) -> Matrix3<f64> {
    let f = params.smoothing_factor(p.x, p.y);
    let w = Vector3::new(params.tau * p.y / f, -params.tau * p.x / f, 1.0);
    let mut g = w * w.transpose();
    g[(0, 0)] += 1.0 / (f * f);
    g[(1, 1)] += 1.0 / (f * f);
    g
}

/// Inverse metric `G⁻¹ = P Pᵀ`, `P` the frame matrix.
fn inverse_metric_raw(params: &BcvParams, p: &Vector3<f64>) -> Matrix3<f64> {
    let m = frame_matrix_raw(params, p);
    m * m.transpose()
}

/// `∂G/∂x` and `∂G/∂y` in closed form; `∂G/∂z = 0`.
fn metric_partials_exact(params: &BcvParams, p: &Vector3<f64>) -> [Matrix3<f64>; 3] {
    let (x, y) = (p.x, p.y);
    let t = params.tau;
    let f = params.smoothing_factor(x, y);
    let fx = 0.5 * params.kappa * x;
    let fy = 0.5 * params.kappa * y;
    let w = Vector3::new(t * y / f, -t * x / f, 1.0);
    let dw_dx = Vector3::new(-t * y * fx / (f * f), -t / f + t * x * fx / (f * f), 0.0);
    let dw_dy = Vector3::new(t / f - t * y * fy / (f * f), t * x * fy / (f * f), 0.0);
    let build = |dw: Vector3<f64>, df: f64| {
        let mut d = dw * w.transpose() + w * dw.transpose();
        let diag = -2.0 * df / (f * f * f);
        d[(0, 0)] += diag;
        d[(1, 1)] += diag;
        d
    };
    [build(dw_dx, fx), build(dw_dy, fy), Matrix3::zeros()]
}

fn metric_partials_fd(params: &BcvParams, p: &Vector3<f64>) -> Result<[Matrix3<f64>; 3]> {
    let mut out = [Matrix3::zeros(); 3];
    for (axis, slot) in out.iter_mut().enumerate() {
        let h = FD_STEP_FIRST * p[axis].abs().max(1.0);
        let mut plus = *p;
        let mut minus = *p;
        plus[axis] += h;
        minus[axis] -= h;
        AmbientPoint::from_coords(params, plus)?;
        AmbientPoint::from_coords(params, minus)?;
        *slot = (metric_matrix_raw(params, &plus) - metric_matrix_raw(params, &minus)) / (2.0 * h);
    }
    Ok(out)
}

fn christoffel_from_partials(ginv: &Matrix3<f64>, dg: &[Matrix3<f64>; 3]) -> Christoffel {
    // Γ_{l,ij} = ½ (∂_i G_jl + ∂_j G_il − ∂_l G_ij)
    let mut lowered = [Matrix3::zeros(); 3];
    for (l, low) in lowered.iter_mut().enumerate() {
        for i in 0..3 {
            for j in 0..3 {
                low[(i, j)] = 0.5 * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]);
            }
        }
    }
    let mut gamma = [Matrix3::zeros(); 3];
    for (k, gk) in gamma.iter_mut().enumerate() {
        for (l, low) in lowered.iter().enumerate() {
            *gk += low * ginv[(k, l)];
        }
    }
    gamma
}

/// Christoffel symbols `Γ^k_ij` at `p`.
pub fn christoffel(params: &BcvParams, p: &AmbientPoint, mode: ConnectionMode) -> Result<Christoffel> {
    christoffel_raw(params, &p.coords, mode)
}

pub(crate) fn christoffel_raw(
    params: &BcvParams,
    p: &Vector3<f64>,
    mode: ConnectionMode,
) -> Result<Christoffel> {
    let dg = match mode {
        ConnectionMode::Exact => metric_partials_exact(params, p),
        ConnectionMode::FiniteDifference => metric_partials_fd(params, p)?,
    };
    Ok(christoffel_from_partials(&inverse_metric_raw(params, p), &dg))
}

/// `Γ(a, b)^k = Γ^k_ij a^i b^j`.
pub(crate) fn contract(gamma: &Christoffel, a: &Vector3<f64>, b: &Vector3<f64>) -> Vector3<f64> {
    Vector3::new(
        a.dot(&(gamma[0] * b)),
        a.dot(&(gamma[1] * b)),
        a.dot(&(gamma[2] * b)),
    )
}

/// Levi-Civita derivative `∇̄_X Y` of a vector field `Y` (coordinate
/// components as a function of the point) in the direction `X`.
///
/// Uses the finite-difference Koszul path; see [`connection_with`].
pub fn connection<Y>(params: &BcvParams, x: &TangentVector, field: Y) -> Result<TangentVector>
where
    Y: Fn(&AmbientPoint) -> Vector3<f64>,
{
    connection_with(params, ConnectionMode::FiniteDifference, x, field)
}

pub fn connection_with<Y>(
    params: &BcvParams,
    mode: ConnectionMode,
    x: &TangentVector,
    field: Y,
) -> Result<TangentVector>
where
    Y: Fn(&AmbientPoint) -> Vector3<f64>,
{
    let p = x.base.coords;
    let gamma = christoffel_raw(params, &p, mode)?;
    let here = field(&x.base);
    let dy = directional_derivative(params, &p, &x.comps, &field)?;
    Ok(TangentVector::at(x.base, dy + contract(&gamma, &x.comps, &here)))
}

/// Central difference of a vector field along `dir`, step scaled to the
/// coordinate magnitude.
pub(crate) fn directional_derivative<Y>(
    params: &BcvParams,
    p: &Vector3<f64>,
    dir: &Vector3<f64>,
    field: &Y,
) -> Result<Vector3<f64>>
where
    Y: Fn(&AmbientPoint) -> Vector3<f64>,
{
    let len = dir.norm();
    if len == 0.0 {
        return Ok(Vector3::zeros());
    }
    let h = FD_STEP_FIRST * p.amax().max(1.0) / len;
    let plus = AmbientPoint::from_coords(params, p + dir * h)?;
    let minus = AmbientPoint::from_coords(params, p - dir * h)?;
    Ok((field(&plus) - field(&minus)) / (2.0 * h))
}

/// Lie bracket `[X, Y]` of two coordinate vector fields at `p`, by central
/// differences.
pub fn lie_bracket<X, Y>(params: &BcvParams, p: &AmbientPoint, xf: X, yf: Y) -> Result<TangentVector>
where
    X: Fn(&AmbientPoint) -> Vector3<f64>,
    Y: Fn(&AmbientPoint) -> Vector3<f64>,
{
    let xv = xf(p);
    let yv = yf(p);
    let dy = directional_derivative(params, &p.coords, &xv, &yf)?;
    let dx = directional_derivative(params, &p.coords, &yv, &xf)?;
    Ok(TangentVector::at(*p, dy - dx))
}

/// Ricci tensor in coordinates assembled from the finite-difference
/// connection: the Christoffel symbols are differentiated once more by
/// central differences with the second-order step.
pub fn ricci_finite_difference(params: &BcvParams, p: &AmbientPoint) -> Result<Matrix3<f64>> {
    let c = p.coords;
    let mode = ConnectionMode::FiniteDifference;
    let gamma = christoffel_raw(params, &c, mode)?;
    // dgamma[m][k] = ∂_m Γ^k
    let mut dgamma = [[Matrix3::<f64>::zeros(); 3]; 3];
    for (m, slot) in dgamma.iter_mut().enumerate() {
        let h = FD_STEP_SECOND * c[m].abs().max(1.0);
        let mut plus = c;
        let mut minus = c;
        plus[m] += h;
        minus[m] -= h;
        AmbientPoint::from_coords(params, plus)?;
        AmbientPoint::from_coords(params, minus)?;
        let gp = christoffel_raw(params, &plus, mode)?;
        let gm = christoffel_raw(params, &minus, mode)?;
        for k in 0..3 {
            slot[k] = (gp[k] - gm[k]) / (2.0 * h);
        }
    }
    // Ric_jk = ∂_i Γ^i_jk − ∂_j Γ^i_ik + Γ^i_im Γ^m_jk − Γ^i_jm Γ^m_ik
    let mut ric = Matrix3::zeros();
    for j in 0..3 {
        for k in 0..3 {
            let mut acc = 0.0;
            for i in 0..3 {
                acc += dgamma[i][i][(j, k)] - dgamma[j][i][(i, k)];
                for m in 0..3 {
                    acc += gamma[i][(i, m)] * gamma[m][(j, k)] - gamma[i][(j, m)] * gamma[m][(i, k)];
                }
            }
            ric[(j, k)] = acc;
        }
    }
    Ok(ric)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(k: f64, t: f64) -> BcvParams {
        BcvParams::new(k, t).unwrap()
    }

    #[test]
    fn smoothing_factor_values() {
        assert_eq!(params(0.0, 0.3).smoothing_factor(5.0, -7.0), 1.0);
        assert_eq!(params(4.0, 0.0).smoothing_factor(1.0, 1.0), 3.0);
        let p = params(-4.0, 0.0);
        assert_eq!(p.smoothing_factor(1.0, 0.0), 0.0);
        assert!(matches!(
            AmbientPoint::new(&p, 1.0, 0.0, 0.0),
            Err(Error::OutOfDomain { .. })
        ));
    }

    #[test]
    fn non_finite_inputs_rejected() {
        assert!(BcvParams::new(f64::NAN, 0.0).is_err());
        assert!(BcvParams::new(0.0, f64::INFINITY).is_err());
        assert_eq!(
            AmbientPoint::new(&params(0.0, 0.0), f64::NAN, 0.0, 0.0),
            Err(Error::NonFinite)
        );
    }

    #[test]
    fn classification_scheme() {
        use GeometryClass::*;
        assert_eq!(params(0.0, 0.0).classify(), Euclidean);
        assert_eq!(params(4.0, 1.0).classify(), SphereMinusPoint);
        assert_eq!(params(4.0, -1.0).classify(), SphereMinusPoint);
        assert_eq!(params(1.0, 0.0).classify(), SphereTimesLine);
        assert_eq!(params(-1.0, 0.0).classify(), HyperbolicTimesLine);
        assert_eq!(params(1.0, 0.5).classify(), SphereMinusPoint);
        assert_eq!(params(1.0, 1.0).classify(), SU2MinusPoint);
        assert_eq!(params(-1.0, 0.5).classify(), SL2RCover);
        assert_eq!(params(0.0, 0.5).classify(), Nil3);
    }

    #[test]
    fn metric_coefficients() {
        let p = params(0.0, 0.5);
        let at = AmbientPoint::new(&p, 1.0, 0.0, 0.0).unwrap();
        let e = |i: usize| TangentVector::at(at, Vector3::ith(i, 1.0));
        assert!((p.metric(&e(1), &e(1)).unwrap() - 1.25).abs() < 1e-15);
        assert!((p.metric(&e(2), &e(2)).unwrap() - 1.0).abs() < 1e-15);
        // the quadratic-form route gives the same value
        let g = p.metric_matrix(&at);
        assert!((g[(1, 1)] - 1.25).abs() < 1e-15);

        let origin = AmbientPoint::new(&p, 0.0, 0.0, 0.0).unwrap();
        let ex = TangentVector::at(origin, Vector3::x());
        assert!((p.metric(&ex, &ex).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn metric_rejects_mismatched_bases() {
        let p = params(1.0, 0.5);
        let a = AmbientPoint::new(&p, 0.0, 0.0, 0.0).unwrap();
        let b = AmbientPoint::new(&p, 0.1, 0.0, 0.0).unwrap();
        let va = TangentVector::at(a, Vector3::x());
        let vb = TangentVector::at(b, Vector3::x());
        assert_eq!(p.metric(&va, &vb), Err(Error::BaseMismatch));
        assert_eq!(p.ricci(&va, &vb), Err(Error::BaseMismatch));
    }

    #[test]
    fn frame_components() {
        let p = params(0.0, 1.0);
        let at = AmbientPoint::new(&p, 1.0, 2.0, 0.0).unwrap();
        let [e1, _, e3] = p.frame(&at);
        assert_eq!(e1.comps, Vector3::new(1.0, 0.0, -2.0));
        assert_eq!(e3.comps, Vector3::z());

        let q = params(3.0, -0.7);
        let origin = AmbientPoint::new(&q, 0.0, 0.0, 4.0).unwrap();
        assert_eq!(q.frame_matrix(&origin), Matrix3::identity());
    }

    #[test]
    fn inverse_metric_is_inverse() {
        let p = params(1.3, -0.4);
        let c = Vector3::new(0.3, -0.8, 1.0);
        let prod = metric_matrix_raw(&p, &c) * inverse_metric_raw(&p, &c);
        assert!((prod - Matrix3::identity()).amax() < 1e-14);
    }

    #[test]
    fn euclidean_connection_is_flat() {
        let p = params(0.0, 0.0);
        let at = AmbientPoint::new(&p, 0.4, -0.2, 1.0).unwrap();
        let x = TangentVector::at(at, Vector3::x());
        let d = connection(&p, &x, |_| Vector3::x()).unwrap();
        assert!(d.comps.norm() < 1e-12);
    }

    #[test]
    fn exact_and_fd_christoffels_agree() {
        for (k, t) in [(0.0, 0.5), (1.0, 0.5), (-1.0, 0.3), (4.0, 1.0)] {
            let p = params(k, t);
            let at = AmbientPoint::new(&p, 0.3, -0.6, 0.2).unwrap();
            let a = christoffel(&p, &at, ConnectionMode::Exact).unwrap();
            let b = christoffel(&p, &at, ConnectionMode::FiniteDifference).unwrap();
            for kk in 0..3 {
                assert!((a[kk] - b[kk]).amax() < 1e-8, "k={k} t={t}");
                assert!((a[kk] - a[kk].transpose()).amax() < 1e-14);
            }
        }
    }

    #[test]
    fn hopf_vector_field_rule() {
        // ∇̄_X E3 = τ X × E3 in the positively oriented frame.
        let p = params(1.0, 0.7);
        let at = AmbientPoint::new(&p, 0.5, 0.2, 0.0).unwrap();
        for i in 0..3 {
            let x = p.frame(&at)[i];
            let d = connection_with(&p, ConnectionMode::Exact, &x, |_| Vector3::z()).unwrap();
            let lhs = p.to_frame(&d);
            let rhs = Vector3::ith(i, 1.0).cross(&Vector3::z()) * p.tau;
            assert!((lhs - rhs).amax() < 1e-12, "i={i}: {lhs:?} vs {rhs:?}");
        }
    }

    #[test]
    fn ricci_closed_form_values() {
        let origin = |p: &BcvParams| AmbientPoint::new(p, 0.0, 0.0, 0.0).unwrap();
        let p = params(1.0, 0.0);
        let [e1, _, e3] = p.frame(&origin(&p));
        assert_eq!(p.ricci(&e1, &e1).unwrap(), 1.0);
        assert_eq!(p.ricci(&e1, &e3).unwrap(), 0.0);
        let q = params(0.0, 0.5);
        let [_, _, e3] = q.frame(&origin(&q));
        assert!((q.ricci(&e3, &e3).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn hopf_projection() {
        let p = params(0.5, 0.5);
        let at = AmbientPoint::new(&p, 1.0, 2.0, 5.0).unwrap();
        assert_eq!(p.hopf_project(&at), Vector2::new(1.0, 2.0));
        let [e1, _, e3] = p.frame(&at);
        assert_eq!(p.hopf_differential(&e3), Vector2::zeros());
        let q = p.hopf_project(&at);
        assert!((p.base_norm(&q, &p.hopf_differential(&e1)) - 1.0).abs() < 1e-14);
    }
}
