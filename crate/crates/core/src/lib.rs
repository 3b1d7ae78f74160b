//! Co-adapted couplings of two continuous-time random walks on the
//! hypercube `Z_2^n`.
//!
//! - [`hypercube`]: vertices and the coupled state with its unmatched set.
//! - [`strategy`]: joint-jump rate matrices and the built-in controls.
//! - [`sim`]: event-driven Monte Carlo with reproducible per-replica streams.
//! - [`analytic`]: exact law of the optimal coupling time and optimality checks.
//! - [`tv`]: total-variation distance and the coupling inequality.
//! - [`verify`]: named pass/fail checks built from the above.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod hypercube;
pub mod output;
pub mod sim;
pub mod stats;
pub mod strategy;
pub mod tv;
pub mod verify;

pub use analytic::{vhat, AnalyticError, HypoexpLaw, LambdaVector};
pub use hypercube::{hamming, CouplingState, HypercubeError, Vertex};
pub use sim::{run_replicas, Engine, ReplicaConfig, RngStream, SimError, SimReport, Start};
pub use strategy::{Control, QSpec, Strategy, StrategyError, StrategyParams, Weights};
pub use tv::{coupling_gap, expected_tau_hat, half_mixing_time, tv, TvCurve, TvError};
