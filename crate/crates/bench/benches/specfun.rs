use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use risuav::specfun::{humbert_phi1, hyp1f1, marcum_q1, reg_lower_gamma};

fn specfun(c: &mut Criterion) {
    c.bench_function("marcum_q1", |b| {
        b.iter(|| marcum_q1(black_box(3.5), black_box(4.2)))
    });
    c.bench_function("reg_lower_gamma", |b| {
        b.iter(|| reg_lower_gamma(black_box(17.3), black_box(12.0)).unwrap())
    });
    c.bench_function("hyp1f1", |b| {
        b.iter(|| hyp1f1(black_box(0.5), black_box(1.0), black_box(0.8)).unwrap())
    });
    c.bench_function("humbert_phi1", |b| {
        b.iter(|| humbert_phi1(black_box(0.5), black_box(0.5), black_box(1.0), black_box(0.3), black_box(0.7)).unwrap())
    });
}

criterion_group!(benches, specfun);
criterion_main!(benches);
