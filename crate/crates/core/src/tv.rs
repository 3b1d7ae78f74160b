//! Total-variation distance between the laws of two walkers started at
//! Hamming distance `k`, and its comparison with the optimal coupling tail.
//!
//! Each coordinate of a walker started at `x` differs from `x(i)` at time
//! `t` with probability `p = (1 - e^{-2t}) / 2`, independently, so only the
//! `k` disagreeing coordinates contribute. Pairing `w` with `k - w`,
//!
//! `TV = sum_{w < k/2} C(k, w) p^w q^{k-w} (1 - (p/q)^{k-2w})`
//!
//! with every term positive.

use serde::Serialize;
use thiserror::Error;

use crate::analytic::{checked_vhat, vhat, AnalyticError};
use crate::stats::compensated_sum;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TvError {
    #[error("level must lie in (0, 1), got {0}")]
    BadLevel(f64),
    #[error("start distance {k} exceeds dimension {n}")]
    DistanceTooLarge { k: usize, n: usize },
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
}

/// `||L(X_t) - L(Y_t)||_TV` for walkers started `k` apart.
///
/// Above one half the value is formed as `1 - overlap`, where the overlap
/// `sum_z min(P_x(z), P_y(z))` is again a sum of positive terms, so the
/// result stays monotone in `t` right up to 1.
pub fn tv(k: usize, t: f64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    if !(t > 0.0) {
        return 1.0;
    }
    let e = (-2.0 * t).exp();
    let ln_p = (-(-2.0 * t).exp_m1() / 2.0).ln();
    let ln_q = e.ln_1p() - std::f64::consts::LN_2;
    let ln_ratio = ln_p - ln_q;
    let mut ln_binom = 0.0f64;
    let mut terms = Vec::with_capacity(k / 2 + 1);
    let mut overlap = Vec::with_capacity(k / 2 + 1);
    for w in 0..k.div_ceil(2) {
        if w > 0 {
            ln_binom += ((k - w + 1) as f64).ln() - (w as f64).ln();
        }
        let gap = -((k - 2 * w) as f64 * ln_ratio).exp_m1();
        let ln_term = ln_binom + w as f64 * ln_p + (k - w) as f64 * ln_q;
        terms.push((ln_term + gap.ln()).exp());
        overlap.push(2.0 * (ln_binom + (k - w) as f64 * ln_p + w as f64 * ln_q).exp());
    }
    let d = compensated_sum(terms);
    if d <= 0.5 {
        return d.max(0.0);
    }
    if k.is_multiple_of(2) {
        let w = k / 2;
        let ln_mid = ln_binom + ((k - w + 1) as f64).ln() - (w as f64).ln() + w as f64 * (ln_p + ln_q);
        overlap.push(ln_mid.exp());
    }
    (1.0 - compensated_sum(overlap)).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TvCurve {
    pub n: usize,
    pub k: usize,
    /// `(t, tv)` pairs.
    pub samples: Vec<(f64, f64)>,
}

pub fn tv_curve(n: usize, k: usize, grid: &[f64]) -> Result<TvCurve, TvError> {
    if k > n {
        return Err(TvError::DistanceTooLarge { k, n });
    }
    Ok(TvCurve {
        n,
        k,
        samples: grid.iter().map(|&t| (t, tv(k, t))).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapRow {
    pub k: usize,
    pub t: f64,
    pub tv: f64,
    pub vhat: f64,
    /// `vhat - tv`, nonnegative by the coupling inequality.
    pub gap: f64,
}

pub fn coupling_gap(k: usize, t: f64) -> Result<GapRow, TvError> {
    let v = checked_vhat(k as i64, t)?;
    let d = tv(k, t);
    Ok(GapRow {
        k,
        t,
        tv: d,
        vhat: v,
        gap: v - d,
    })
}

/// Solves `f(t) = level` for a nonincreasing `f` with `f(0) >= level`.
fn bisect_level(f: impl Fn(f64) -> f64, level: f64) -> f64 {
    if f(0.0) <= level {
        return 0.0;
    }
    let mut hi = 1.0;
    while f(hi) > level {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn check_level(level: f64) -> Result<(), TvError> {
    if !(level > 0.0 && level < 1.0) {
        return Err(TvError::BadLevel(level));
    }
    Ok(())
}

/// Time at which `tv(k, .)` falls to `level`, to `1e-9` in `t`.
pub fn half_mixing_time(n: usize, k: usize, level: f64) -> Result<f64, TvError> {
    check_level(level)?;
    if k > n {
        return Err(TvError::DistanceTooLarge { k, n });
    }
    Ok(bisect_level(|t| tv(k, t), level))
}

/// Time at which the optimal coupling tail `vhat(k, .)` falls to `level`.
pub fn vhat_level_time(k: usize, level: f64) -> Result<f64, TvError> {
    check_level(level)?;
    checked_vhat(k as i64, 0.0)?;
    Ok(bisect_level(|t| vhat(k as i64, t), level))
}

/// `E[tau]` of the optimal coupling from distance `k`.
pub fn expected_tau_hat(k: usize) -> f64 {
    let m = k / 2;
    let even = compensated_sum((1..=m).map(|i| 0.5 / i as f64));
    if k % 2 == 1 {
        even + 1.0 / (4 * m + 2) as f64
    } else {
        even
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::log_grid;

    /// Direct enumeration over the `2^k` configurations of the unmatched block.
    fn tv_enumerated(k: usize, t: f64) -> f64 {
        let p = (1.0 - (-2.0 * t).exp()) / 2.0;
        let q = 1.0 - p;
        let mut total = 0.0;
        for z in 0u32..(1 << k) {
            let ones = z.count_ones() as i32;
            let from_zero = p.powi(ones) * q.powi(k as i32 - ones);
            let from_one = p.powi(k as i32 - ones) * q.powi(ones);
            total += (from_zero - from_one).abs();
        }
        total / 2.0
    }

    #[test]
    fn tv_examples() {
        for &t in &[0.0f64, 0.01, 0.3, 1.0, 4.0] {
            let e = (-2.0 * t).exp();
            assert!((tv(1, t) - e).abs() < 1e-15);
            assert!((tv(2, t) - e).abs() < 1e-15);
            assert!((tv(2, t) - vhat(2, t)).abs() < 1e-15);
        }
        for k in 1..20 {
            assert_eq!(tv(k, 0.0), 1.0);
        }
        assert_eq!(tv(0, 1.0), 0.0);
    }

    #[test]
    fn matches_enumeration() {
        for k in 0..=12 {
            for t in log_grid(1e-3, 10.0, 40).unwrap() {
                let a = tv(k, t);
                let b = tv_enumerated(k, t);
                assert!((a - b).abs() < 1e-12, "k={k} t={t}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn coupling_inequality_on_grid() {
        let grid = log_grid(1e-3, 20.0, 50).unwrap();
        for k in 0..=300 {
            let mut prev = f64::INFINITY;
            for &t in &grid {
                let row = coupling_gap(k, t).unwrap();
                assert!(row.gap >= -1e-12, "{row:?}");
                assert!((0.0..=1.0).contains(&row.tv));
                assert!(row.tv <= prev + 1e-15, "k={k} t={t}: {} after {prev}", row.tv);
                prev = row.tv;
            }
        }
        assert!(coupling_gap(8, 1.0).unwrap().gap > 0.0);
        for &t in &grid {
            assert!(coupling_gap(1, t).unwrap().gap.abs() < 1e-12);
            assert!(coupling_gap(2, t).unwrap().gap.abs() < 1e-12);
        }
    }

    #[test]
    fn mixing_time_examples() {
        let t = half_mixing_time(1, 1, 0.5).unwrap();
        assert!((t - 0.5 * std::f64::consts::LN_2).abs() < 1e-8);
        let cut = 0.25 * (1024f64).ln();
        let t = half_mixing_time(1024, 1024, 0.5).unwrap();
        assert!((t / cut - 1.0).abs() < 0.15, "{t} vs {cut}");
        assert!(half_mixing_time(1, 1, 1.0 - 1e-9).unwrap() < 1e-8);
        let levels = [1.0 - 1e-9, 0.9, 0.5, 0.1];
        let times: Vec<f64> = levels
            .iter()
            .map(|&l| half_mixing_time(10, 10, l).unwrap())
            .collect();
        assert!(times.windows(2).all(|w| w[0] < w[1]), "{times:?}");
        assert!(half_mixing_time(5, 6, 0.5).is_err());
        assert!(half_mixing_time(5, 3, 1.0).is_err());
        assert_eq!(half_mixing_time(5, 0, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn expectation_examples() {
        assert_eq!(expected_tau_hat(0), 0.0);
        assert!((expected_tau_hat(4) - 0.75).abs() < 1e-15);
        assert!((expected_tau_hat(3) - 2.0 / 3.0).abs() < 1e-15);
        let mut prev = 0.0;
        for p in [6, 8, 10, 12, 14] {
            let n = 1usize << p;
            let r = expected_tau_hat(n) / (0.5 * (n as f64).ln());
            assert!((0.9..=1.05).contains(&r), "n={n}: {r}");
            assert!(r > prev);
            prev = r;
        }
    }

    #[test]
    fn non_maximal_at_scale() {
        let a = vhat_level_time(1024, 0.5).unwrap();
        let b = half_mixing_time(1024, 1024, 0.5).unwrap();
        let ratio = a / b;
        assert!((1.5..=2.5).contains(&ratio), "{ratio}");
    }
}
