use bcv_core::rotation::{integrate_noncmc_branch, IntegrationConfig, TerminationStatus};
use bcv_core::verify::{run_suite, zero_set_mismatches, DEFAULT_SEED, SUITES};
use bcv_core::{BcvParams, ProfileState};

#[test]
fn every_suite_passes_on_representative_parameters() {
    for (k, t) in [(0.0, 0.0), (1.0, 0.0), (-1.0, 0.0), (0.0, 0.5), (1.0, 0.5), (1.0, 1.0), (-1.0, 0.5), (4.0, 1.0)] {
        let p = BcvParams::new(k, t).unwrap();
        for suite in SUITES {
            for entry in run_suite(suite, &p, DEFAULT_SEED).unwrap() {
                assert!(entry.pass, "({k}, {t}) {entry:?}");
                assert!(entry.name.starts_with(suite));
            }
        }
    }
}

#[test]
fn suites_are_deterministic_for_a_seed() {
    let p = BcvParams::new(-0.5, 0.7).unwrap();
    for suite in ["frame", "ricci", "theorem52"] {
        assert_eq!(run_suite(suite, &p, 7).unwrap(), run_suite(suite, &p, 7).unwrap());
    }
}

#[test]
fn unknown_suite_is_rejected() {
    let p = BcvParams::new(0.0, 0.0).unwrap();
    assert!(run_suite("no-such-suite", &p, DEFAULT_SEED).is_err());
}

#[test]
fn branch_violates_first_equation_off_space_forms() {
    let p = BcvParams::new(0.0, 0.5).unwrap();
    let init = ProfileState::new(&p, 0.0, 0.8, 0.0, 1.0).unwrap();
    let config = IntegrationConfig {
        step: 1e-3,
        max_steps: 5_000,
        s_max: 2.0,
    };
    let traj = integrate_noncmc_branch(&p, init, config).unwrap();
    assert!(traj.max_abs_r2() < 1e-10);
    assert!(traj.max_abs_r1() > 1e-3);
    assert_eq!(zero_set_mismatches(&traj.rows), 0);
    assert_ne!(traj.status, TerminationStatus::DomainExit);
}

#[test]
fn branch_in_space_form_is_biconservative() {
    let p = BcvParams::new(4.0, 1.0).unwrap();
    let init = ProfileState::new(&p, 0.0, 0.5, 0.0, 1.2).unwrap();
    let config = IntegrationConfig {
        step: 1e-3,
        max_steps: 2_000,
        s_max: 1.0,
    };
    let traj = integrate_noncmc_branch(&p, init, config).unwrap();
    assert!(traj.max_abs_r1() < 1e-10);
    assert!(!traj.warnings.is_empty());
}
