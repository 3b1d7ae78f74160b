//! Closed-form law of the optimal coupling time and the optimality checks
//! built on it.

mod law;
mod optimality;
mod transform;

use thiserror::Error;

pub use law::{
    cdf, checked_vhat, evaluate, tail_curvature, tail_step, vhat, vhat_diff, vhat_dt, HypoexpLaw, TailEval,
    MAX_CLOSED_FORM_K,
};
pub use optimality::{
    bellman_residual, drift_deficit, generator_apply, maximize_over_ln, parity_gap, LambdaVector, LpSolution,
    Vertex5, LN_TOLERANCE,
};
pub use transform::{check_laplace_identities, d_alpha, phi_alpha, theta, v_alpha, IdentityResiduals};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error("transform parameter must be positive and finite, got {0}")]
    BadAlpha(f64),
    #[error("time must be finite and nonnegative, got {0}")]
    BadTime(f64),
    #[error("invalid {what}: {value}")]
    BadIndex { what: &'static str, value: i64 },
    #[error("k = {k} exceeds the closed-form range (max {max}); use the Monte Carlo engine")]
    BeyondClosedForm { k: usize, max: usize },
    #[error("rate vector outside L_n ({constraint}): {detail}")]
    OutsidePolytope {
        constraint: &'static str,
        detail: String,
    },
}
