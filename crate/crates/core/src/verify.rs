//! Named pass/fail checks over the analytic results and the simulator.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::analytic::{
    bellman_residual, check_laplace_identities, d_alpha, maximize_over_ln, parity_gap, vhat, AnalyticError,
    LambdaVector,
};
use crate::hypercube::{CouplingState, Vertex};
use crate::sim::{
    marginal_flip_counts, run_replicas, sample_replicas, Engine, ReplicaConfig, RngStream, RunOptions,
    SimError, Start,
};
use crate::stats::{dkw_half_width, ks_critical_value, ks_two_sample, log_grid};
use crate::strategy::{lambda_rates, validate_qspec, Control, Strategy, StrategyParams};

pub const CHECK_NAMES: [&str; 7] = [
    "identities",
    "parity",
    "bellman",
    "polytope",
    "dominance",
    "lumping",
    "marginals",
];

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown check {0:?}; expected one of {names}", names = CHECK_NAMES.join(", "))]
    UnknownCheck(String),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    /// What was swept.
    pub grid: String,
    pub max_residual: f64,
    pub threshold: f64,
    pub pass: bool,
    pub detail: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub m_max: usize,
    pub alphas: Vec<f64>,
    pub parity_k_max: usize,
    pub bellman_k_max: usize,
    /// Time grid of the analytic checks.
    pub t_grid: Vec<f64>,
    /// Time grid of the Monte Carlo tail comparisons.
    pub sim_grid: Vec<f64>,
    /// Overrides the per-check default dimension.
    pub n: Option<usize>,
    pub lumping_ks: Vec<usize>,
    pub replicas: u64,
    pub seed: u64,
    pub horizon: f64,
    pub parallelism: Option<usize>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            m_max: 50,
            alphas: vec![0.01, 0.1, 1.0, 10.0, 100.0],
            parity_k_max: 100,
            bellman_k_max: 200,
            t_grid: log_grid(1e-3, 20.0, 50).expect("valid grid"),
            sim_grid: log_grid(0.01, 10.0, 50).expect("valid grid"),
            n: None,
            lumping_ks: vec![3, 6, 10],
            replicas: 100_000,
            seed: 7,
            horizon: 1e4,
            parallelism: None,
        }
    }
}

pub fn run_check(name: &str, cfg: &VerifyConfig) -> Result<CheckResult, VerifyError> {
    match name {
        "identities" => check_identities(cfg.m_max, &cfg.alphas),
        "parity" => Ok(check_parity(cfg.parity_k_max, &cfg.t_grid)),
        "bellman" => check_bellman(cfg.bellman_k_max, &cfg.t_grid),
        "polytope" => check_polytope(cfg.n.unwrap_or(8)),
        "dominance" => check_dominance(cfg.n.unwrap_or(6), cfg),
        "lumping" => check_lumping(cfg.n.unwrap_or(10), cfg),
        "marginals" => check_marginals(cfg.n.unwrap_or(8), cfg.horizon, cfg.seed),
        other => Err(VerifyError::UnknownCheck(other.to_string())),
    }
}

pub fn check_identities(m_max: usize, alphas: &[f64]) -> Result<CheckResult, VerifyError> {
    const THRESHOLD: f64 = 1e-10;
    const D2_THRESHOLD: f64 = 1e-14;
    let mut worst = (0.0f64, String::new());
    for m in 1..=m_max {
        for &a in alphas {
            let r = check_laplace_identities(m, a)?;
            for (name, v) in r.entries() {
                if v.abs() > worst.0 {
                    worst = (v.abs(), format!("{name} at m={m}, alpha={a}"));
                }
            }
        }
    }
    let mut d2 = 0.0f64;
    for &a in alphas {
        d2 = d2.max(d_alpha(2, a)?.abs());
    }
    let pass = worst.0 < THRESHOLD && d2 < D2_THRESHOLD;
    Ok(CheckResult {
        name: "identities".into(),
        grid: format!("m=1..={m_max}, alpha in {alphas:?}"),
        max_residual: worst.0,
        threshold: THRESHOLD,
        pass,
        detail: vec![
            format!("worst: {}", worst.1),
            format!("max |D_alpha(2)| = {d2:e} (threshold {D2_THRESHOLD:e})"),
        ],
    })
}

/// Odd distances need a nonnegative gap, even ones a nonpositive gap.
pub fn check_parity(k_max: usize, grid: &[f64]) -> CheckResult {
    const THRESHOLD: f64 = 1e-12;
    let mut worst = 0.0f64;
    let mut detail = Vec::new();
    for k in 1..=k_max {
        for &t in grid {
            let g = parity_gap(k, t);
            let violation = if k % 2 == 1 { -g } else { g };
            if violation > worst {
                worst = violation;
            }
            if violation > THRESHOLD {
                detail.push(format!("k={k} t={t}: gap {g:e}"));
            }
        }
    }
    CheckResult {
        name: "parity".into(),
        grid: format!("k=1..={k_max}, {} times", grid.len()),
        max_residual: worst,
        threshold: THRESHOLD,
        pass: worst <= THRESHOLD,
        detail,
    }
}

/// The rate maximizer over `L_n` is the optimal rate vector and the optimal
/// tail solves the Bellman equation.
pub fn check_bellman(k_max: usize, grid: &[f64]) -> Result<CheckResult, VerifyError> {
    const THRESHOLD: f64 = 1e-9;
    let n = k_max + 2;
    let mut worst = 0.0f64;
    let mut detail = Vec::new();
    let mut k1_non_unique = true;
    let mut argmax_ok = true;
    for k in 1..=k_max {
        for &t in grid {
            worst = worst.max(bellman_residual(k, t)?);
            let sol = maximize_over_ln(k, t, n)?;
            if k == 1 {
                k1_non_unique &= !sol.is_unique();
                if sol.argmax.down1 != 2.0 {
                    argmax_ok = false;
                    detail.push(format!("k=1 t={t}: argmax {:?}", sol.argmax));
                }
                continue;
            }
            let a = sol.argmax;
            let want = LambdaVector::optimal(n, k);
            if a.up1 != 0.0 || a.up2 != 0.0 || a.down1 != want.down1 || a.down2 != want.down2 {
                argmax_ok = false;
                detail.push(format!("k={k} t={t}: argmax {a:?}"));
            }
        }
    }
    if !k1_non_unique {
        detail.push("k=1: expected a non-unique argmax".into());
    } else {
        detail.push("k=1: argmax non-unique (upward single moves cost nothing there)".into());
    }
    Ok(CheckResult {
        name: "bellman".into(),
        grid: format!("k=1..={k_max}, n={n}, {} times", grid.len()),
        max_residual: worst,
        threshold: THRESHOLD,
        pass: worst < THRESHOLD && argmax_ok && k1_non_unique,
        detail,
    })
}

/// The dominance battery: `u` chosen per parity of the distance and a
/// shared `b`, each from `{0, 1/2, 1}`.
pub fn dominance_battery(n: usize) -> Vec<Strategy> {
    let levels = [0.0, 0.5, 1.0];
    let mut out = Vec::new();
    for &u_odd in &levels {
        for &u_even in &levels {
            for &b in &levels {
                out.push(match (u_odd, u_even, b) {
                    (0.0, 0.0, 0.0) => Strategy::Aldous,
                    (1.0, 1.0, 1.0) => Strategy::Independent,
                    _ => Strategy::Parametric {
                        name: format!("u_odd={u_odd},u_even={u_even},b={b}"),
                        params: StrategyParams::by_parity(n, u_odd, u_even, b).expect("levels lie in [0, 1]"),
                    },
                });
            }
        }
    }
    out
}

/// Every built-in control yields an admissible matrix whose distance rates
/// lie in `L_n`, for every state with `n <= n_max`.
pub fn check_polytope(n_max: usize) -> Result<CheckResult, VerifyError> {
    let mut worst = 0.0f64;
    let mut detail = Vec::new();
    let mut states = 0usize;
    for n in 1..=n_max {
        let mut controls = vec![Strategy::Optimal];
        controls.extend(dominance_battery(n));
        for mask in 0u64..(1 << n) {
            let bits: Vec<bool> = (0..n).map(|b| mask >> b & 1 == 1).collect();
            let s = CouplingState::new(
                Vertex::zeros(n).map_err(SimError::from)?,
                Vertex::from_bits(&bits).map_err(SimError::from)?,
            )
            .map_err(SimError::from)?;
            states += 1;
            for c in &controls {
                let q = c.qspec(&s).map_err(SimError::from)?;
                let mut sums = vec![0.0f64; 2 * (n + 1)];
                for ((i, j), r) in q.entries() {
                    sums[i] += r;
                    sums[n + 1 + j] += r;
                }
                for (idx, s) in sums.iter().enumerate() {
                    if idx != 0 && idx != n + 1 {
                        worst = worst.max((s - 1.0).abs());
                    }
                }
                if let Err(e) = validate_qspec(&q) {
                    detail.push(format!("{} n={n} y={mask:b}: {e}", c.label()));
                }
                let l = lambda_rates(&q, &s).map_err(SimError::from)?;
                if let Err(e) = l.check() {
                    detail.push(format!("{} n={n} y={mask:b}: {e}", c.label()));
                }
            }
        }
    }
    Ok(CheckResult {
        name: "polytope".into(),
        grid: format!("n=1..={n_max}, {states} states, 28 controls"),
        max_residual: worst,
        threshold: crate::strategy::SUM_TOLERANCE,
        pass: detail.is_empty(),
        detail,
    })
}

/// Empirical tails of every battery strategy stay above the optimal tail,
/// up to a simultaneous band shared across all comparisons.
pub fn check_dominance(n: usize, cfg: &VerifyConfig) -> Result<CheckResult, VerifyError> {
    let battery = dominance_battery(n);
    let comparisons = battery.len() * n;
    let band = dkw_half_width(cfg.replicas as usize, 0.01 / comparisons as f64);
    let mut worst = f64::NEG_INFINITY;
    let mut detail = Vec::new();
    for (si, strategy) in battery.into_iter().enumerate() {
        let label = strategy.label();
        let engine = Engine::BitLevel(Arc::new(strategy));
        for k0 in 1..=n {
            let report = run_replicas(&ReplicaConfig {
                start: Start::Distance { n, k: k0 },
                engine: engine.clone(),
                replicas: cfg.replicas,
                t_grid: cfg.sim_grid.clone(),
                seed: cfg.seed.wrapping_add((si * 64 + k0) as u64),
                parallelism: cfg.parallelism,
                options: RunOptions::default(),
            })?;
            for row in &report.tail {
                let shortfall = vhat(k0 as i64, row[0]) - row[1];
                worst = worst.max(shortfall);
                if shortfall > band {
                    detail.push(format!("{label} k0={k0} t={}: shortfall {shortfall:e}", row[0]));
                }
            }
        }
    }
    Ok(CheckResult {
        name: "dominance".into(),
        grid: format!(
            "n={n}, k0=1..={n}, 27 strategies, {} replicas, {} times",
            cfg.replicas,
            cfg.sim_grid.len()
        ),
        max_residual: worst,
        threshold: band,
        pass: worst <= band,
        detail,
    })
}

fn taus(config: &ReplicaConfig) -> Result<Vec<f64>, SimError> {
    Ok(sample_replicas(config)?.iter().map(|s| s.tau).collect())
}

/// Bit-level simulation of the optimal control against the distance chain.
pub fn check_lumping(n: usize, cfg: &VerifyConfig) -> Result<CheckResult, VerifyError> {
    let ks: Vec<usize> = cfg.lumping_ks.iter().copied().filter(|&k| k <= n).collect();
    let reps = cfg.replicas;
    let crit = ks_critical_value(0.01, reps as usize, reps as usize);
    let mut worst = 0.0f64;
    let mut detail = Vec::new();
    for &k in &ks {
        let base = ReplicaConfig {
            start: Start::Distance { n, k },
            engine: Engine::BitLevel(Arc::new(Strategy::Optimal)),
            replicas: reps,
            t_grid: vec![0.0],
            seed: cfg.seed,
            parallelism: cfg.parallelism,
            options: RunOptions::default(),
        };
        let bit = taus(&base)?;
        let chain = taus(&ReplicaConfig {
            engine: Engine::ParityChain,
            seed: cfg.seed ^ 0x9e37_79b9_7f4a_7c15,
            ..base
        })?;
        let d = ks_two_sample(&bit, &chain);
        worst = worst.max(d);
        detail.push(format!("k={k}: KS {d:.6}"));
    }
    Ok(CheckResult {
        name: "lumping".into(),
        grid: format!("n={n}, k in {ks:?}, {reps} + {reps} replicas"),
        max_residual: worst,
        threshold: crit,
        pass: !ks.is_empty() && worst < crit,
        detail,
    })
}

/// Each coordinate of `x` flips at unit rate under every built-in control.
pub fn check_marginals(n: usize, horizon: f64, seed: u64) -> Result<CheckResult, VerifyError> {
    let mut worst = 0.0f64;
    let mut detail = Vec::new();
    let controls = [Strategy::Optimal, Strategy::Aldous, Strategy::Independent];
    for (idx, c) in controls.iter().enumerate() {
        let mut rng = RngStream::new(seed, idx as u64);
        let counts = marginal_flip_counts(n, c, horizon, &mut rng)?;
        for i in 1..=n {
            let (rate, se) = counts.x_rate(i);
            let z = (rate - 1.0).abs() / se;
            worst = worst.max(z);
            if z > 3.0 {
                detail.push(format!(
                    "{} coordinate {i}: rate {rate:.5} (se {se:.5})",
                    c.label()
                ));
            }
        }
        detail.push(format!("{}: {} restarts", c.label(), counts.renewals));
    }
    Ok(CheckResult {
        name: "marginals".into(),
        grid: format!("n={n}, horizon {horizon}, 3 controls"),
        max_residual: worst,
        threshold: 3.0,
        pass: worst <= 3.0,
        detail,
    })
}
