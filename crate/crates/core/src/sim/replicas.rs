use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::hypercube::{hamming, CouplingState, Vertex};
use crate::stats::{dkw_half_width, normal_half_width};
use crate::strategy::Control;

use super::engine::{run_coupling, run_parity_chain, CouplingSample, RunOptions};
use super::rng::RngStream;
use super::SimError;

/// Confidence level of the simultaneous band stored in reports.
pub const DKW_DELTA: f64 = 0.01;

/// Censored fraction above which no mean is reported.
pub const MAX_CENSORED_FRACTION: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub enum Start {
    Vertices(Vertex, Vertex),
    /// `x = 0`, `y` = ones on the first `k` coordinates.
    Distance {
        n: usize,
        k: usize,
    },
}

impl Start {
    pub fn state(&self) -> Result<CouplingState, SimError> {
        Ok(match self {
            Start::Vertices(x, y) => CouplingState::new(x.clone(), y.clone())?,
            Start::Distance { n, k } => {
                if k > n {
                    return Err(SimError::Config {
                        field: "k",
                        message: format!("{k} exceeds n = {n}"),
                    });
                }
                CouplingState::new(Vertex::zeros(*n)?, Vertex::with_prefix_ones(*n, *k)?)?
            }
        })
    }

    pub fn distance(&self) -> Result<usize, SimError> {
        match self {
            Start::Vertices(x, y) => Ok(hamming(x, y)?),
            Start::Distance { n, k } => {
                if k > n {
                    return Err(SimError::Config {
                        field: "k",
                        message: format!("{k} exceeds n = {n}"),
                    });
                }
                Ok(*k)
            }
        }
    }
}

#[derive(Clone)]
pub enum Engine {
    /// Full simulation of both walkers under a control.
    BitLevel(Arc<dyn Control>),
    /// The distance process of the optimal coupling only.
    ParityChain,
}

impl Engine {
    pub fn label(&self) -> String {
        match self {
            Engine::BitLevel(c) => format!("bit:{}", c.label()),
            Engine::ParityChain => "parity".into(),
        }
    }
}

impl std::fmt::Debug for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Debug, Clone)]
pub struct ReplicaConfig {
    pub start: Start,
    pub engine: Engine,
    pub replicas: u64,
    pub t_grid: Vec<f64>,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool.
    pub parallelism: Option<usize>,
    pub options: RunOptions,
}

impl ReplicaConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |field, message: String| Err(SimError::Config { field, message });
        if self.replicas == 0 {
            return bad("replicas", "must be at least 1".into());
        }
        if self.t_grid.is_empty() {
            return bad("t_grid", "must be nonempty".into());
        }
        if self.t_grid.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return bad("t_grid", "entries must be finite and nonnegative".into());
        }
        if self.t_grid.windows(2).any(|w| !(w[0] < w[1])) {
            return bad("t_grid", "must be strictly ascending".into());
        }
        if self.parallelism == Some(0) {
            return bad("parallelism", "must be at least 1".into());
        }
        if !(self.options.t_max > 0.0) {
            return bad("t_max", format!("must be positive, got {}", self.options.t_max));
        }
        self.start.distance()?;
        Ok(())
    }
}

/// Runs every replica and returns the samples in stream order.
///
/// Replica `r` always draws from stream `r` of `seed`, so the output does
/// not depend on the number of workers.
pub fn sample_replicas(config: &ReplicaConfig) -> Result<Vec<CouplingSample>, SimError> {
    config.validate()?;
    let state = config.start.state()?;
    let k0 = config.start.distance()? as i64;
    let one = |r: u64| -> Result<CouplingSample, SimError> {
        let mut rng = RngStream::new(config.seed, r);
        match &config.engine {
            Engine::BitLevel(control) => {
                run_coupling(state.clone(), control.as_ref(), config.options, &mut rng)
            }
            Engine::ParityChain => {
                let tau = run_parity_chain(k0, &mut rng)?;
                Ok(if tau > config.options.t_max {
                    CouplingSample {
                        tau: config.options.t_max,
                        censored: true,
                        events: 0,
                    }
                } else {
                    CouplingSample {
                        tau,
                        censored: false,
                        events: 0,
                    }
                })
            }
        }
    };
    let run = || -> Result<Vec<CouplingSample>, SimError> {
        (0..config.replicas).into_par_iter().map(one).collect()
    };
    match config.parallelism {
        Some(1) => (0..config.replicas).map(one).collect(),
        Some(p) => rayon::ThreadPoolBuilder::new()
            .num_threads(p)
            .build()
            .map_err(|e| SimError::Config {
                field: "parallelism",
                message: e.to_string(),
            })?
            .install(run),
        None => run(),
    }
}

/// Summary of a batch of coupling-time samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub replicas: u64,
    pub seed: u64,
    pub engine: String,
    pub k0: usize,
    /// `[t, P(tau > t), 95% pointwise half-width]`.
    pub tail: Vec<[f64; 3]>,
    /// Half-width of the simultaneous 99% band.
    pub dkw: f64,
    pub mean_tau: Option<f64>,
    pub se: Option<f64>,
    pub censored: u64,
    pub censored_fraction: f64,
    pub max_events: u64,
}

impl SimReport {
    /// Censored samples count as exceeding every grid time.
    pub fn from_samples(
        samples: &[CouplingSample],
        t_grid: &[f64],
        seed: u64,
        engine: String,
        k0: usize,
    ) -> Self {
        let n = samples.len();
        let mut taus: Vec<f64> = samples.iter().filter(|s| !s.censored).map(|s| s.tau).collect();
        taus.sort_by(f64::total_cmp);
        let censored = (n - taus.len()) as u64;
        let tail = t_grid
            .iter()
            .map(|&t| {
                let at_most = taus.partition_point(|&x| x <= t);
                let p = (n - at_most) as f64 / n as f64;
                [t, p, normal_half_width(p, n)]
            })
            .collect();
        let censored_fraction = censored as f64 / n as f64;
        let (mean_tau, se) = if censored_fraction > MAX_CENSORED_FRACTION {
            (None, None)
        } else {
            let mean = samples.iter().map(|s| s.tau).sum::<f64>() / n as f64;
            let var = if n > 1 {
                samples.iter().map(|s| (s.tau - mean).powi(2)).sum::<f64>() / (n - 1) as f64
            } else {
                0.0
            };
            (Some(mean), Some((var / n as f64).sqrt()))
        };
        Self {
            replicas: n as u64,
            seed,
            engine,
            k0,
            tail,
            dkw: dkw_half_width(n, DKW_DELTA),
            mean_tau,
            se,
            censored,
            censored_fraction,
            max_events: samples.iter().map(|s| s.events).max().unwrap_or(0),
        }
    }
}

pub fn run_replicas(config: &ReplicaConfig) -> Result<SimReport, SimError> {
    let samples = sample_replicas(config)?;
    Ok(SimReport::from_samples(
        &samples,
        &config.t_grid,
        config.seed,
        config.engine.label(),
        config.start.distance()?,
    ))
}
