//! Monte Carlo simulation of coupled walks with reproducible per-replica
//! random streams.

mod engine;
mod replicas;
mod rng;

use thiserror::Error;

use crate::hypercube::HypercubeError;
use crate::strategy::StrategyError;

pub use engine::{
    block_rates, draw, marginal_flip_counts, run_coupling, run_coupling_observed, run_parity_chain, step,
    CouplingSample, Event, FlipCounts, Jump, RunOptions,
};
pub use replicas::{
    run_replicas, sample_replicas, Engine, ReplicaConfig, SimReport, Start, DKW_DELTA, MAX_CENSORED_FRACTION,
};
pub use rng::RngStream;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("frozen state: total jump rate is zero")]
    Frozen,
    #[error("invalid {field}: {message}")]
    Config { field: &'static str, message: String },
    #[error("block sampler disagrees with the rate matrix at N = {k}: {detail}")]
    CrossCheck { k: usize, detail: String },
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error(transparent)]
    Hypercube(#[from] HypercubeError),
}
