use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use bcv_bench::{nil, surfaces};
use bcv_core::ambient::{ricci_finite_difference, AmbientPoint};
use bcv_core::biconservative::{constant_angle_suite, tangential_bitension};
use bcv_core::immersion::{shape_operator, surface_jet};
use bcv_core::rotation::{integrate_noncmc_branch, IntegrationConfig};
use bcv_core::ProfileState;

fn ambient(c: &mut Criterion) {
    let params = nil();
    let p = AmbientPoint::new(&params, 0.3, -0.2, 0.5).unwrap();
    c.bench_function("ricci finite difference", |b| {
        b.iter(|| ricci_finite_difference(black_box(&params), black_box(&p)))
    });
    c.bench_function("constant angle quartic", |b| {
        b.iter(|| constant_angle_suite(black_box(&params), black_box(0.7)))
    });
}

fn surface(c: &mut Criterion) {
    let params = nil();
    let mut group = c.benchmark_group("surface");
    for (name, s, (u, v)) in surfaces(&params) {
        group.bench_with_input(BenchmarkId::new("jet", name), &s, |b, s| {
            b.iter(|| surface_jet(s, &params, black_box(u), black_box(v)))
        });
        group.bench_with_input(BenchmarkId::new("shape operator", name), &s, |b, s| {
            b.iter(|| shape_operator(s, &params, black_box(u), black_box(v)))
        });
        group.bench_with_input(BenchmarkId::new("tangential bitension", name), &s, |b, s| {
            b.iter(|| tangential_bitension(s, &params, black_box(u), black_box(v)))
        });
    }
    group.finish();
}

fn branch(c: &mut Criterion) {
    let params = nil();
    let init = ProfileState::new(&params, 0.0, 0.8, 0.0, 1.0).unwrap();
    let config = IntegrationConfig {
        step: 1e-3,
        max_steps: 1_000,
        s_max: 1.0,
    };
    c.bench_function("branch integration 1000 steps", |b| {
        b.iter(|| integrate_noncmc_branch(black_box(&params), init, config))
    });
}

criterion_group!(benches, ambient, surface, branch);
criterion_main!(benches);
