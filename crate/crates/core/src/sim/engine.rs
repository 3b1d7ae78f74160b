//! Event-driven simulation of the coupled pair.
//!
//! With `Q` constant between jumps, the superposition of the per-entry
//! Poisson clocks is a single clock of rate `R = sum Q` whose marks are
//! drawn with probability proportional to `Q`. Controls that expose
//! `(u, b)` weights are sampled by block: first the block (singles on `U`,
//! pairs on `U`, synchronous moves on `M`, singles on `M`) by aggregate
//! rate, then a uniform member of that block.

use crate::hypercube::{CouplingState, Vertex};
use crate::strategy::{lambda_rates, validate_qspec, Control, QSpec, Weights};

use super::rng::RngStream;
use super::SimError;

/// One joint jump: wait `dt`, then `x <- x + e_i`, `y <- y + e_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jump {
    pub dt: f64,
    pub i: usize,
    pub j: usize,
}

/// Draws the next jump from an explicit rate matrix and applies it.
pub fn step(state: &mut CouplingState, q: &QSpec, rng: &mut RngStream) -> Result<Jump, SimError> {
    let jump = draw_from_q(q, rng)?;
    state.apply(jump.i, jump.j)?;
    Ok(jump)
}

fn draw_from_q(q: &QSpec, rng: &mut RngStream) -> Result<Jump, SimError> {
    let total = q.total_rate();
    if !(total > 0.0) {
        return Err(SimError::Frozen);
    }
    let dt = rng.exp(total);
    let target = rng.uniform() * total;
    let mut acc = 0.0;
    let mut pick = (0, 0);
    for ((i, j), r) in q.entries() {
        pick = (i, j);
        acc += r;
        if target < acc {
            break;
        }
    }
    Ok(Jump {
        dt,
        i: pick.0,
        j: pick.1,
    })
}

/// Aggregate rates `[singles on U, pairs on U, sync on M, singles on M]`.
pub fn block_rates(n: usize, k: usize, w: Weights) -> [f64; 4] {
    let w = w.effective(k);
    let (k, m) = (k as f64, (n - k) as f64);
    [
        2.0 * k * w.u,
        if k >= 2.0 { k * (1.0 - w.u) } else { 0.0 },
        m * (1.0 - w.b),
        2.0 * m * w.b,
    ]
}

fn draw_structural(state: &CouplingState, w: Weights, rng: &mut RngStream) -> Result<Jump, SimError> {
    let rates = block_rates(state.dim(), state.n_unmatched(), w);
    let total: f64 = rates.iter().sum();
    if !(total > 0.0) {
        return Err(SimError::Frozen);
    }
    let dt = rng.exp(total);
    let target = rng.uniform() * total;
    let mut block = 3;
    let mut acc = 0.0;
    for (b, r) in rates.iter().enumerate() {
        acc += r;
        if target < acc && *r > 0.0 {
            block = b;
            break;
        }
    }
    // rounding can leave `block` on an empty last block
    while rates[block] <= 0.0 {
        block -= 1;
    }
    let u = state.unmatched();
    let (i, j) = match block {
        0 | 3 => {
            let c = if block == 0 {
                u[rng.index(u.len())]
            } else {
                let r = rng.index(state.n_matched());
                state.nth_matched(r).expect("rank below n_matched")
            };
            if rng.coin() {
                (c, 0)
            } else {
                (0, c)
            }
        }
        1 => {
            let a = rng.index(u.len());
            let mut b = rng.index(u.len() - 1);
            if b >= a {
                b += 1;
            }
            (u[a], u[b])
        }
        _ => {
            let c = state
                .nth_matched(rng.index(state.n_matched()))
                .expect("rank below n_matched");
            (c, c)
        }
    };
    Ok(Jump { dt, i, j })
}

fn cross_check(state: &CouplingState, control: &dyn Control, w: Weights) -> Result<(), SimError> {
    let q = control.qspec(state)?;
    validate_qspec(&q).map_err(|e| SimError::CrossCheck {
        k: state.n_unmatched(),
        detail: e.to_string(),
    })?;
    let l = lambda_rates(&q, state)?;
    let b = block_rates(state.dim(), state.n_unmatched(), w);
    let pairs = [
        ("down1", l.down1, b[0]),
        ("down2", l.down2, b[1]),
        ("stay", l.stay, b[2]),
        ("up1", l.up1, b[3]),
        ("up2", l.up2, 0.0),
    ];
    for (name, from_q, structural) in pairs {
        if (from_q - structural).abs() > 1e-9 {
            return Err(SimError::CrossCheck {
                k: state.n_unmatched(),
                detail: format!("{name}: matrix gives {from_q}, block sampler gives {structural}"),
            });
        }
    }
    Ok(())
}

/// Draws the next jump under `control` without applying it.
pub fn draw(
    state: &CouplingState,
    control: &dyn Control,
    cross: bool,
    rng: &mut RngStream,
) -> Result<Jump, SimError> {
    match control.weights(state.n_unmatched()) {
        Some(w) => {
            if cross {
                cross_check(state, control, w)?;
            }
            draw_structural(state, w, rng)
        }
        None => draw_from_q(&control.qspec(state)?, rng),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    /// Censoring horizon.
    pub t_max: f64,
    /// Materialize `Q` at every jump and compare against the block rates.
    pub cross_check: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            t_max: 1e6,
            cross_check: false,
        }
    }
}

/// Outcome of one coupling run. `tau = t_max` when censored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingSample {
    pub tau: f64,
    pub censored: bool,
    pub events: u64,
}

/// A jump as seen by an observer: time after the jump and `N` around it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub t: f64,
    pub i: usize,
    pub j: usize,
    pub before: usize,
    pub after: usize,
}

/// Runs until the first collision or `t_max`.
pub fn run_coupling(
    state: CouplingState,
    control: &dyn Control,
    opts: RunOptions,
    rng: &mut RngStream,
) -> Result<CouplingSample, SimError> {
    run_coupling_observed(state, control, opts, rng, &mut |_| {})
}

pub fn run_coupling_observed(
    mut state: CouplingState,
    control: &dyn Control,
    opts: RunOptions,
    rng: &mut RngStream,
    observer: &mut dyn FnMut(&Event),
) -> Result<CouplingSample, SimError> {
    if !(opts.t_max > 0.0) {
        return Err(SimError::Config {
            field: "t_max",
            message: format!("must be positive, got {}", opts.t_max),
        });
    }
    let mut t = 0.0;
    let mut events = 0u64;
    while !state.is_coupled() {
        let jump = draw(&state, control, opts.cross_check, rng)?;
        if t + jump.dt > opts.t_max {
            return Ok(CouplingSample {
                tau: opts.t_max,
                censored: true,
                events,
            });
        }
        t += jump.dt;
        let before = state.n_unmatched();
        state.apply(jump.i, jump.j)?;
        events += 1;
        observer(&Event {
            t,
            i: jump.i,
            j: jump.j,
            before,
            after: state.n_unmatched(),
        });
    }
    Ok(CouplingSample {
        tau: t,
        censored: false,
        events,
    })
}

/// Samples the distance process of the optimal coupling directly: odd `k`
/// drops by one at rate `2k`, even `k` drops by two at rate `k`.
pub fn run_parity_chain(k0: i64, rng: &mut RngStream) -> Result<f64, SimError> {
    if k0 < 0 {
        return Err(SimError::Config {
            field: "k",
            message: format!("must be nonnegative, got {k0}"),
        });
    }
    let mut k = k0 as u64;
    let mut t = 0.0;
    while k > 0 {
        if k % 2 == 1 {
            t += rng.exp(2.0 * k as f64);
            k -= 1;
        } else {
            t += rng.exp(k as f64);
            k -= 2;
        }
    }
    Ok(t)
}

/// Per-coordinate flip counts of both walkers over a fixed horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct FlipCounts {
    pub horizon: f64,
    /// Indexed by coordinate, entry 0 unused.
    pub x: Vec<u64>,
    pub y: Vec<u64>,
    /// Times the pair collided and `y` was restarted at the antipode of `x`.
    pub renewals: u64,
}

impl FlipCounts {
    /// Empirical rate and its standard error for coordinate `i` of `x`.
    pub fn x_rate(&self, i: usize) -> (f64, f64) {
        let c = self.x[i] as f64;
        (c / self.horizon, c.sqrt() / self.horizon)
    }

    pub fn y_rate(&self, i: usize) -> (f64, f64) {
        let c = self.y[i] as f64;
        (c / self.horizon, c.sqrt() / self.horizon)
    }
}

/// Runs the coupled pair for `horizon` time units, restarting `y` at the
/// complement of `x` on every collision so the control keeps being
/// exercised away from the diagonal. Restarts do not count as flips.
pub fn marginal_flip_counts(
    n: usize,
    control: &dyn Control,
    horizon: f64,
    rng: &mut RngStream,
) -> Result<FlipCounts, SimError> {
    if !(horizon > 0.0) {
        return Err(SimError::Config {
            field: "horizon",
            message: format!("must be positive, got {horizon}"),
        });
    }
    let mut state = CouplingState::new(Vertex::zeros(n)?, Vertex::ones(n)?)?;
    let mut counts = FlipCounts {
        horizon,
        x: vec![0; n + 1],
        y: vec![0; n + 1],
        renewals: 0,
    };
    let mut t = 0.0;
    loop {
        if state.is_coupled() {
            let anti = Vertex::from_bits(&state.x().bits().iter().map(|b| !b).collect::<Vec<_>>())?;
            state.reset_y(anti)?;
            counts.renewals += 1;
        }
        let jump = draw(&state, control, false, rng)?;
        if t + jump.dt > horizon {
            break;
        }
        t += jump.dt;
        state.apply(jump.i, jump.j)?;
        if jump.i > 0 {
            counts.x[jump.i] += 1;
        }
        if jump.j > 0 {
            counts.y[jump.j] += 1;
        }
    }
    Ok(counts)
}
