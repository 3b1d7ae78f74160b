use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use hqc_core::sim::{run_coupling, run_parity_chain, run_replicas, RunOptions};
use hqc_core::strategy::optimal_q;
use hqc_core::{Control, CouplingState, Engine, ReplicaConfig, RngStream, Start, Strategy, Vertex};

fn start(n: usize, k: usize) -> CouplingState {
    CouplingState::new(Vertex::zeros(n).unwrap(), Vertex::with_prefix_ones(n, k).unwrap()).unwrap()
}

fn coupling_runs(c: &mut Criterion) {
    let mut g = c.benchmark_group("run_coupling");
    for n in [10usize, 100, 1000] {
        for strat in [Strategy::Optimal, Strategy::Aldous, Strategy::Independent] {
            let s = start(n, n);
            let mut stream = 0u64;
            g.bench_with_input(BenchmarkId::new(strat.label(), n), &n, |b, _| {
                b.iter(|| {
                    stream += 1;
                    let mut rng = RngStream::new(1, stream);
                    black_box(run_coupling(s.clone(), &strat, RunOptions::default(), &mut rng).unwrap())
                })
            });
        }
    }
    g.finish();
}

/// The explicit-matrix path, for comparison with the block sampler.
fn matrix_steps(c: &mut Criterion) {
    let mut g = c.benchmark_group("matrix_step");
    for n in [10usize, 50] {
        let s = start(n, n / 2);
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            let mut rng = RngStream::new(2, 0);
            b.iter(|| {
                let mut t = s.clone();
                let q = optimal_q(&t);
                black_box(hqc_core::sim::step(&mut t, &q, &mut rng).unwrap())
            })
        });
    }
    g.finish();
}

fn parity_chain(c: &mut Criterion) {
    let mut rng = RngStream::new(3, 0);
    c.bench_function("parity_chain/k=1024", |b| {
        b.iter(|| black_box(run_parity_chain(1024, &mut rng).unwrap()))
    });
}

fn replicas(c: &mut Criterion) {
    let mut g = c.benchmark_group("replicas");
    g.sample_size(10);
    let reps = 10_000u64;
    g.throughput(Throughput::Elements(reps));
    for threads in [1usize, 4] {
        let cfg = ReplicaConfig {
            start: Start::Distance { n: 10, k: 10 },
            engine: Engine::BitLevel(Arc::new(Strategy::Optimal)),
            replicas: reps,
            t_grid: vec![0.1, 1.0, 10.0],
            seed: 42,
            parallelism: Some(threads),
            options: RunOptions::default(),
        };
        g.bench_with_input(BenchmarkId::new("n10_k10", threads), &cfg, |b, cfg| {
            b.iter(|| black_box(run_replicas(cfg).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, coupling_runs, matrix_steps, parity_chain, replicas);
criterion_main!(benches);
