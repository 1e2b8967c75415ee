//! Shared fixtures for the geometry benchmarks.

use bcv_core::verify::{sample_ellipse_tube, sample_revolution};
use bcv_core::{rotation::hopf_cylinder, BcvParams, ParametricSurface};

/// Parameters of the Heisenberg group, a generic non-space-form case.
pub fn nil() -> BcvParams {
    BcvParams::new(0.0, 0.5).expect("valid parameters")
}

/// Named surfaces covering each chart kind, with an interior sample point.
pub fn surfaces(params: &BcvParams) -> Vec<(&'static str, ParametricSurface, (f64, f64))> {
    let cylinder = hopf_cylinder(params, 1.0).expect("cylinder fits the domain");
    let revolution = sample_revolution(params).expect("revolution fits the domain");
    let tube = sample_ellipse_tube(params).expect("tube fits the domain");
    let at = |s: &ParametricSurface| s.domain().lerp(0.4, 0.6);
    vec![
        ("hopf-cylinder", cylinder.clone(), at(&cylinder)),
        ("revolution", revolution.clone(), at(&revolution)),
        ("hopf-tube", tube.clone(), at(&tube)),
    ]
}
