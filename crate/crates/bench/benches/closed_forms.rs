use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hqc_core::analytic::{maximize_over_ln, vhat};
use hqc_core::tv::{half_mixing_time, tv};

fn tails(c: &mut Criterion) {
    let mut g = c.benchmark_group("vhat");
    for k in [2i64, 11, 300, 1024, 1025] {
        g.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| {
            b.iter(|| black_box(vhat(k, black_box(1.3))))
        });
    }
    g.finish();
}

fn total_variation(c: &mut Criterion) {
    let mut g = c.benchmark_group("tv");
    for k in [8usize, 256, 1024] {
        g.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| {
            b.iter(|| black_box(tv(k, black_box(1.3))))
        });
    }
    g.finish();
    c.bench_function("half_mixing_time/1024", |b| {
        b.iter(|| black_box(half_mixing_time(1024, 1024, 0.5).unwrap()))
    });
}

fn lp(c: &mut Criterion) {
    c.bench_function("maximize_over_ln/k=57", |b| {
        b.iter(|| black_box(maximize_over_ln(57, black_box(0.8), 200).unwrap()))
    });
}

criterion_group!(benches, tails, total_variation, lp);
criterion_main!(benches);
