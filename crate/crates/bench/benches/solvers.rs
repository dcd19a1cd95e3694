use criterion::{black_box, criterion_group, criterion_main, Criterion};

use nuradial_bench::magnetic;
use nuradial_core::{
    cardano_roots, converge, depress, eigenfunction, landscape, solve_spectrum, BranchPolicy, BranchSign, R0Policy,
    RealCubic,
};

fn cubic(c: &mut Criterion) {
    let p = RealCubic::new(1.0, -6.0, 11.0, -6.0).unwrap();
    c.bench_function("cardano_roots", |b| b.iter(|| cardano_roots(&depress(black_box(&p)))));
}

fn potential(c: &mut Criterion) {
    let p = magnetic();
    c.bench_function("landscape_magnetic", |b| b.iter(|| landscape(black_box(&p))));
}

fn spectrum(c: &mut Criterion) {
    let p = magnetic();
    c.bench_function("spectrum_magnetic_n10", |b| {
        b.iter(|| solve_spectrum(black_box(&p), R0Policy::Explicit(1.0), 10, BranchPolicy::Both).unwrap())
    });
    let s = nuradial_core::spectrum::state(&p, 1.0, 5, BranchSign::Plus).unwrap();
    let u = eigenfunction(&s).unwrap();
    c.bench_function("eigenfunction_eval_1000", |b| {
        b.iter(|| (0..1000).map(|i| u.eval(black_box(0.02 * i as f64))).sum::<f64>())
    });
}

fn oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    g.bench_function("hydrogen_converge", |b| {
        b.iter(|| converge(|r| -1.0 / r, 2, black_box(1e-6)).unwrap())
    });
    g.finish();
}

criterion_group!(benches, cubic, potential, spectrum, oracle);
criterion_main!(benches);
