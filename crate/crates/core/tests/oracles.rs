//! Frozen reference values and closed-form cross-checks.

use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::Arc;

use bcv_core::biconservative::{constant_angle_suite, normal_bitension, tangential_bitension, QuarticConclusion};
use bcv_core::immersion::{mean_curvature, shape_operator, surface_jet};
use bcv_core::rotation::{
    hopf_cylinder, reduced_bicon_system, reduced_mean_curvature, reduced_quantities, revolution_surface,
    branch_obstruction, IntegratedProfile, Profile, ProfileLaw, RoundSphere,
};
use bcv_core::{BcvParams, GeometryClass, ProfileState};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() < tol
}

#[test]
fn ricci_diagonal_values() {
    let p = BcvParams::new(1.0, 0.5).unwrap();
    assert_eq!(p.ricci_frame_diagonal().as_slice(), &[0.5, 0.5, 0.5]);
    let p = BcvParams::new(0.0, 0.5).unwrap();
    assert_eq!(p.ricci_frame_diagonal().as_slice(), &[-0.5, -0.5, 0.5]);
}

#[test]
fn classification_table() {
    let cases = [
        ((0.0, 0.0), GeometryClass::Euclidean),
        ((0.0, 0.5), GeometryClass::Nil3),
        ((1.0, 0.5), GeometryClass::SphereMinusPoint),
        ((1.0, 1.0), GeometryClass::SU2MinusPoint),
        ((-1.0, 0.5), GeometryClass::SL2RCover),
    ];
    for ((k, t), class) in cases {
        assert_eq!(BcvParams::new(k, t).unwrap().classify(), class, "({k}, {t})");
    }
}

#[test]
fn hopf_cylinder_mean_curvature_is_frozen() {
    for (k, t, r0) in [(0.0, 0.5, 1.0), (1.0, 1.0, 0.5), (-1.0, 0.5, 1.0), (4.0, 1.0, 2.0)] {
        let p = BcvParams::new(k, t).unwrap();
        let s = hopf_cylinder(&p, r0).unwrap();
        let f = mean_curvature(&s, &p, 0.2, 1.1).unwrap();
        assert!(close(f, 1.0 / r0 - k * r0 / 4.0, 1e-8), "({k}, {t}, {r0}): {f}");
    }
}

#[test]
fn hopf_cylinder_normal_bitension_value() {
    let p = BcvParams::new(0.0, 0.5).unwrap();
    let s = hopf_cylinder(&p, 1.0).unwrap();
    let value = normal_bitension(&s, &p, 0.0, 2.0).unwrap();
    assert!(close(value, 2.0, 1e-6), "{value}");
}

#[test]
fn unit_sphere_normal_bitension_is_four() {
    let p = BcvParams::new(0.0, 0.0).unwrap();
    let s = revolution_surface(&p, Arc::new(RoundSphere::new(&p, 1.0, 0.3).unwrap()));
    for (u, v) in [(1.0, 0.5), (1.6, 3.0), (2.4, 5.5)] {
        assert!(close(normal_bitension(&s, &p, u, v).unwrap(), 4.0, 1e-5));
        assert!(p.norm(&tangential_bitension(&s, &p, u, v).unwrap()) < 1e-6);
    }
}

#[test]
fn quartic_reference_roots() {
    let p = BcvParams::new(1.0, 0.0).unwrap();
    let report = constant_angle_suite(&p, PI / 3.0).unwrap();
    let half_sqrt3 = 3.0_f64.sqrt() / 2.0;
    assert_eq!(report.real_roots.len(), 3);
    assert!(close(report.real_roots[0], -half_sqrt3, 1e-12));
    assert_eq!(report.real_roots[1], 0.0);
    assert!(close(report.real_roots[2], half_sqrt3, 1e-12));

    let p = BcvParams::new(0.0, 0.5).unwrap();
    let report = constant_angle_suite(&p, FRAC_PI_4).unwrap();
    assert!(close(report.coefficients[0], 6.0, 1e-12));
    assert!(close(report.coefficients[1], 7.0, 1e-12));
    assert!(close(report.coefficients[2], -1.0, 1e-12));
    let mu = (73.0_f64.sqrt() - 7.0) / 12.0;
    assert_eq!(report.real_roots.len(), 2);
    assert!(close(report.real_roots[1], mu.sqrt(), 1e-12));
    assert_eq!(report.conclusion, QuarticConclusion::ConstantRoots);

    let right = constant_angle_suite(&p, PI / 2.0).unwrap();
    assert!(right.degenerate);
    assert_eq!(right.conclusion, QuarticConclusion::LambdaConstant);
}

#[test]
fn obstruction_worked_value() {
    let p = BcvParams::new(1.0, 1.0).unwrap();
    let st = ProfileState::new(&p, 0.0, 1.0, 0.0, FRAC_PI_4).unwrap();
    assert!(close(branch_obstruction(&p, &st).unwrap(), 3.0, 1e-12));
}

#[test]
fn branch_first_equation_value() {
    let p = BcvParams::new(1.0, 1.0).unwrap();
    let st = ProfileState::new(&p, 0.0, 1.0, 0.0, FRAC_PI_4).unwrap();
    let sp = bcv_core::rotation::branch_sigma_prime(&p, st.r, st.sigma);
    let f = bcv_core::rotation::branch_mean_curvature(&st);
    let fp = bcv_core::rotation::branch_mean_curvature_derivative(&st);
    assert!(close(reduced_mean_curvature(&p, &st, sp).unwrap(), f, 1e-14));
    let (r1, r2) = reduced_bicon_system(&p, &st, sp, f, fp).unwrap();
    assert!(close(r1, -1.0 / 2.0_f64.sqrt(), 1e-12), "{r1}");
    assert!(r2.abs() < 1e-14);
}

fn generic_revolution(p: &BcvParams) -> (IntegratedProfile, bcv_core::ParametricSurface) {
    let anchor = ProfileState::new(p, 0.0, 0.9, 0.0, 0.9).unwrap();
    let profile = IntegratedProfile::new(p, anchor, ProfileLaw::Polynomial(vec![0.3, -0.2]), (-0.4, 0.4)).unwrap();
    let surface = revolution_surface(p, Arc::new(profile.clone()));
    (profile, surface)
}

#[test]
fn reduced_coefficients_match_the_jet() {
    let p = BcvParams::new(1.0, 0.8).unwrap();
    let (profile, surface) = generic_revolution(&p);
    for (s, theta) in [(-0.3, 0.4), (0.0, 2.0), (0.25, 4.0)] {
        let st = profile.state(s).unwrap();
        let red = reduced_quantities(&p, &st).unwrap();
        let jet = surface_jet(&surface, &p, s, theta).unwrap();
        assert!(close(red.cos_alpha, jet.cos_alpha, 1e-12));
        let t = jet.xv.comps * red.a + jet.xu.comps * red.b;
        let jt = jet.xv.comps * red.c + jet.xu.comps * red.d;
        assert!((t - jet.t.comps).amax() < 1e-10, "T at {s}");
        assert!((jt - jet.jt.comps).amax() < 1e-10, "JT at {s}");
        assert!(close(red.sin_alpha_squared(), jet.sin_alpha.powi(2), 1e-12));
    }
}

#[test]
fn reduced_mean_curvature_matches_shape_trace() {
    let p = BcvParams::new(-0.5, 0.5).unwrap();
    let (profile, surface) = generic_revolution(&p);
    for s in [-0.3, 0.1, 0.35] {
        let st = profile.state(s).unwrap();
        let f = reduced_mean_curvature(&p, &st, profile.sigma_prime(s).unwrap()).unwrap();
        let trace = shape_operator(&surface, &p, s, 1.0).unwrap().f;
        assert!(close(f, trace, 1e-8), "{s}: {f} vs {trace}");
    }
}
