//! End-to-end acceptance run. Prints one line per criterion and exits
//! nonzero if any of them fails.
//!
//! Runs under `cargo test`; the Monte Carlo criteria take a few minutes in
//! total on a small machine.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use hqc_core::analytic::{maximize_over_ln, vhat};
use hqc_core::sim::{run_replicas, Engine, ReplicaConfig, RunOptions, Start};
use hqc_core::stats::log_grid;
use hqc_core::tv::vhat_level_time;
use hqc_core::verify::{
    check_bellman, check_dominance, check_identities, check_lumping, check_marginals, check_parity,
    CheckResult, VerifyConfig,
};
use hqc_core::{coupling_gap, expected_tau_hat, half_mixing_time, Strategy};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    summary: String,
}

fn from_check(r: CheckResult, budget: Option<Duration>, elapsed: Duration) -> Outcome {
    let in_time = budget.is_none_or(|b| elapsed < b);
    let mut summary = format!(
        "max residual {:.3e} vs threshold {:.3e}",
        r.max_residual, r.threshold
    );
    if let Some(b) = budget {
        summary.push_str(&format!(", budget {}s", b.as_secs()));
    }
    if !r.pass {
        let shown: Vec<&str> = r.detail.iter().take(3).map(String::as_str).collect();
        summary.push_str(&format!("; {}", shown.join("; ")));
    }
    Outcome {
        pass: r.pass && in_time,
        summary,
    }
}

fn exact_law_agreement() -> Outcome {
    let start = Instant::now();
    let report = run_replicas(&ReplicaConfig {
        start: Start::Distance { n: 10, k: 10 },
        engine: Engine::BitLevel(Arc::new(Strategy::Optimal)),
        replicas: 100_000,
        t_grid: log_grid(0.01, 10.0, 50).unwrap(),
        seed: 20_240_601,
        parallelism: Some(1),
        options: RunOptions::default(),
    })
    .unwrap();
    let elapsed = start.elapsed();
    let worst = report
        .tail
        .iter()
        .map(|row| (row[1] - vhat(10, row[0])).abs())
        .fold(0.0, f64::max);
    Outcome {
        pass: worst <= report.dkw && elapsed < Duration::from_secs(30),
        summary: format!(
            "max |empirical - exact| {worst:.3e} vs band {:.3e}, single thread",
            report.dkw
        ),
    }
}

fn lumping() -> Outcome {
    let r = check_lumping(10, &VerifyConfig::default()).unwrap();
    let mut o = from_check(r.clone(), None, Duration::ZERO);
    o.summary = format!("{} ({})", o.summary, r.detail.join(", "));
    o
}

fn dominance() -> Outcome {
    let start = Instant::now();
    let r = check_dominance(6, &VerifyConfig::default()).unwrap();
    from_check(r, Some(Duration::from_secs(600)), start.elapsed())
}

fn identities() -> Outcome {
    let cfg = VerifyConfig::default();
    let start = Instant::now();
    let r = check_identities(cfg.m_max, &cfg.alphas).unwrap();
    from_check(r, Some(Duration::from_secs(1)), start.elapsed())
}

fn parity() -> Outcome {
    let grid = log_grid(1e-3, 20.0, 50).unwrap();
    let start = Instant::now();
    let r = check_parity(100, &grid);
    from_check(r, Some(Duration::from_secs(1)), start.elapsed())
}

fn bellman() -> Outcome {
    let grid = log_grid(1e-3, 20.0, 50).unwrap();
    let r = check_bellman(200, &grid).unwrap();
    let k1 = maximize_over_ln(1, 1.0, 202).unwrap();
    let mut o = from_check(r, None, Duration::ZERO);
    o.summary
        .push_str(&format!(", k=1 has {} maximizing vertices", k1.maximizers.len()));
    o
}

fn marginals() -> Outcome {
    let r = check_marginals(8, 1e4, 11).unwrap();
    let mut o = from_check(r, None, Duration::ZERO);
    o.summary = o.summary.replace("max residual", "max |z|");
    o
}

fn mean_time() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for engine in [Engine::ParityChain, Engine::BitLevel(Arc::new(Strategy::Optimal))] {
        let r = run_replicas(&ReplicaConfig {
            start: Start::Distance { n: 10, k: 4 },
            engine,
            replicas: 100_000,
            t_grid: vec![1.0],
            seed: 5,
            parallelism: None,
            options: RunOptions::default(),
        })
        .unwrap();
        let (mean, se) = (r.mean_tau.unwrap_or(f64::NAN), r.se.unwrap_or(f64::NAN));
        let z = (mean - 0.75).abs() / se;
        pass &= z <= 3.0;
        lines.push(format!("{} mean {mean:.5} (z {z:.2})", r.engine));
    }
    let n = 1024usize;
    let ratio = expected_tau_hat(n) / (0.5 * (n as f64).ln());
    pass &= (0.9..=1.05).contains(&ratio);
    lines.push(format!("E/(ln n / 2) at n=1024 is {ratio:.4}"));
    Outcome {
        pass,
        summary: lines.join(", "),
    }
}

fn non_maximality() -> Outcome {
    let k = 1024usize;
    let t_v = vhat_level_time(k, 0.5).unwrap();
    let t_tv = half_mixing_time(k, k, 0.5).unwrap();
    let ratio = t_v / t_tv;
    let mut worst_gap = f64::INFINITY;
    let mut worst_equal = 0.0f64;
    for t in log_grid(1e-3, 20.0, 50).unwrap() {
        for kk in (0..=64).chain([128, 256, 512, 1024]) {
            worst_gap = worst_gap.min(coupling_gap(kk, t).unwrap().gap);
        }
        for kk in [1, 2] {
            worst_equal = worst_equal.max(coupling_gap(kk, t).unwrap().gap.abs());
        }
    }
    Outcome {
        pass: (1.5..=2.5).contains(&ratio) && worst_gap >= -1e-12 && worst_equal <= 1e-12,
        summary: format!(
            "time ratio {ratio:.4} ({t_v:.4} / {t_tv:.4}), min(vhat - tv) {worst_gap:.2e}, max |vhat - tv| at k<=2 {worst_equal:.2e}"
        ),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("exact-law agreement", exact_law_agreement),
        ("lumping equivalence", lumping),
        ("stochastic minimum", dominance),
        ("Laplace identities", identities),
        ("parity signs", parity),
        ("Bellman certification", bellman),
        ("marginal flip rates", marginals),
        ("mean coupling time", mean_time),
        ("non-maximality", non_maximality),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let status = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {}: {status} {name} [{:.2}s] {}",
            i + 1,
            start.elapsed().as_secs_f64(),
            o.summary
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
