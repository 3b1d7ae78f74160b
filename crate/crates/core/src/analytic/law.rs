//! The law of the optimal coupling time started from Hamming distance `k`.
//!
//! Under the optimal strategy the distance process is a pure-death chain:
//! from odd `k` it drops by one at rate `2k`, from even `k` it drops by two
//! at rate `k`. The coupling time is therefore a sum of independent
//! exponentials with rates `2, 4, ..., 2m` (plus `4m + 2` when `k = 2m + 1`).
//!
//! Two evaluation routes are provided. [`HypoexpLaw`] carries the textbook
//! partial-fraction mixture, which is exact algebraically but has
//! alternating binomial-size coefficients and is only usable for small `k`.
//! The free functions ([`vhat`], [`cdf`], [`vhat_dt`]) use the identity
//! `Exp(2) + Exp(4) + ... + Exp(2m) = max of m iid Exp(2)`, which turns the
//! even tail into `1 - (1 - e^{-2t})^m` and the odd tail into that plus a
//! positive series. Every quantity is then a sum of positive terms and keeps
//! full relative precision in both the tail and the distribution function.

use super::AnalyticError;

/// Largest start distance accepted by the closed-form evaluators. The series
/// cost is linear in `k`; past this the Monte Carlo engine is the tool.
pub const MAX_CLOSED_FORM_K: usize = 1 << 16;

/// Rates and partial-fraction weights of the coupling-time law.
#[derive(Debug, Clone, PartialEq)]
pub struct HypoexpLaw {
    k: usize,
    rates: Vec<f64>,
    coeffs: Vec<f64>,
}

impl HypoexpLaw {
    pub fn new(k: usize) -> Self {
        let m = k / 2;
        let mut rates: Vec<f64> = (1..=m).map(|i| 2.0 * i as f64).collect();
        if k % 2 == 1 {
            rates.push((4 * m + 2) as f64);
        }
        let coeffs = rates
            .iter()
            .enumerate()
            .map(|(i, &ri)| {
                rates
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &rj)| rj / (rj - ri))
                    .product()
            })
            .collect();
        Self { k, rates, coeffs }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `sum_i c_i e^{-r_i t}`. Loses precision quickly beyond `k ~ 30`.
    pub fn mixture_tail(&self, t: f64) -> f64 {
        self.rates
            .iter()
            .zip(&self.coeffs)
            .map(|(r, c)| c * (-r * t).exp())
            .sum()
    }

    pub fn mixture_density(&self, t: f64) -> f64 {
        self.rates
            .iter()
            .zip(&self.coeffs)
            .map(|(r, c)| c * r * (-r * t).exp())
            .sum()
    }

    pub fn mean(&self) -> f64 {
        self.rates.iter().map(|r| 1.0 / r).sum()
    }

    /// `E[exp(-alpha * tau)]`.
    pub fn laplace(&self, alpha: f64) -> f64 {
        self.rates.iter().map(|r| r / (r + alpha)).product()
    }
}

/// Tail and distribution function evaluated together.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailEval {
    pub tail: f64,
    pub cdf: f64,
}

/// `P(tau > t | N_0 = k)`, zero for `k <= 0`.
pub fn vhat(k: i64, t: f64) -> f64 {
    evaluate(k, t).tail
}

/// `P(tau <= t | N_0 = k)`, computed with relative precision.
pub fn cdf(k: i64, t: f64) -> f64 {
    evaluate(k, t).cdf
}

/// `vhat(a, t) - vhat(b, t)`. Adjacent distances go through
/// [`tail_step`]; otherwise whichever representation is small is
/// subtracted so that the difference keeps relative precision.
pub fn vhat_diff(a: i64, b: i64, t: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    if (a - b).abs() <= 2 {
        let (hi, lo, sign) = if a > b { (a, b, 1.0) } else { (b, a, -1.0) };
        return sign * ((lo + 1)..=hi).map(|j| tail_step(j, t)).sum::<f64>();
    }
    let ea = evaluate(a, t);
    let eb = evaluate(b, t);
    if ea.tail <= 0.5 && eb.tail <= 0.5 {
        ea.tail - eb.tail
    } else {
        eb.cdf - ea.cdf
    }
}

/// `vhat(k, t) - vhat(k - 1, t)` as a positive series.
///
/// With `W = e^{2t} - 1`, for `m >= 2`
///   step(2m)   = sum_{j=1}^{m-1} C(m-1,j) j/(m-1+j) W^{m-1+j} / (1+W)^{2m-1}
/// and `step(2m + 1)` is the odd extra tail. `step(1) = e^{-2t}`,
/// `step(2) = 0`.
pub fn tail_step(k: i64, t: f64) -> f64 {
    if k <= 0 || k == 2 {
        return 0.0;
    }
    if k == 1 {
        return (-2.0 * t.max(0.0)).exp();
    }
    if t <= 0.0 || t == f64::INFINITY {
        return 0.0;
    }
    let m = (k / 2) as usize;
    if k % 2 == 1 {
        return OddSeries::new(m, t).extra_tail();
    }
    let ln_w = ln_w(t);
    let mut ln_binom = 0.0f64;
    let mut terms = Vec::with_capacity(m);
    for j in 1..m {
        ln_binom += ((m - j) as f64 / j as f64).ln();
        let p = (m - 1 + j) as f64;
        terms.push(ln_binom + (j as f64 / p).ln() + p * ln_w);
    }
    (log_sum_exp(&terms) - (2 * m - 1) as f64 * 2.0 * t).exp()
}

/// `vhat(k) - 2 vhat(k-1) + vhat(k-2)`, i.e. `tail_step(k) - tail_step(k-1)`.
///
/// Its sign is the parity of `k`, and for `k >= 3` it is a single-signed
/// series in `W = e^{2t} - 1`, so it keeps relative precision even where it
/// is many orders of magnitude below the tails themselves:
///   k = 2m+1: + sum_{i=0}^{m-1} a_i W^{m+i} / (1+W)^{2m+1},
///             a_i = C(m,i) (m-i) ((m-1)(m-2) + i m) / (m (m+i) (m+i-1) (m+i-2))
///   k = 2m:   - sum_{j=0}^{m-2} C(m-1,j) (m-1-j)/(m-1+j) W^{m-1+j} / (1+W)^{2m-1}
pub fn tail_curvature(k: i64, t: f64) -> f64 {
    match k {
        i64::MIN..=0 => return 0.0,
        1 => return tail_step(1, t),
        2 => return -tail_step(1, t),
        3 => return tail_step(3, t),
        _ => {}
    }
    if t <= 0.0 || t == f64::INFINITY {
        return 0.0;
    }
    let m = (k / 2) as usize;
    let ln_w = ln_w(t);
    let mut terms = Vec::with_capacity(m);
    if k % 2 == 1 {
        let mf = m as f64;
        let mut ln_binom = 0.0f64;
        for i in 0..m {
            if i > 0 {
                ln_binom += ((m - i + 1) as f64 / i as f64).ln();
            }
            let fi = i as f64;
            let ln_a = if i == 0 {
                -mf.ln()
            } else {
                ln_binom + (mf - fi).ln() + ((mf - 1.0) * (mf - 2.0) + fi * mf).ln()
                    - mf.ln()
                    - (mf + fi).ln()
                    - (mf + fi - 1.0).ln()
                    - (mf + fi - 2.0).ln()
            };
            terms.push(ln_a + (mf + fi) * ln_w);
        }
        (log_sum_exp(&terms) - (2 * m + 1) as f64 * 2.0 * t).exp()
    } else {
        let mut ln_binom = 0.0f64;
        for j in 0..m - 1 {
            if j > 0 {
                ln_binom += ((m - j) as f64 / j as f64).ln();
            }
            let p = (m - 1 + j) as f64;
            terms.push(ln_binom + ((m - 1 - j) as f64 / p).ln() + p * ln_w);
        }
        -(log_sum_exp(&terms) - (2 * m - 1) as f64 * 2.0 * t).exp()
    }
}

pub fn checked_vhat(k: i64, t: f64) -> Result<f64, AnalyticError> {
    check_k(k)?;
    check_t(t)?;
    Ok(vhat(k, t))
}

pub(crate) fn check_k(k: i64) -> Result<(), AnalyticError> {
    if k > MAX_CLOSED_FORM_K as i64 {
        return Err(AnalyticError::BeyondClosedForm {
            k: k as usize,
            max: MAX_CLOSED_FORM_K,
        });
    }
    Ok(())
}

pub(crate) fn check_t(t: f64) -> Result<(), AnalyticError> {
    if !(t >= 0.0) || t.is_infinite() {
        return Err(AnalyticError::BadTime(t));
    }
    Ok(())
}

pub fn evaluate(k: i64, t: f64) -> TailEval {
    if k <= 0 {
        return TailEval { tail: 0.0, cdf: 1.0 };
    }
    if t <= 0.0 {
        return TailEval { tail: 1.0, cdf: 0.0 };
    }
    if t == f64::INFINITY {
        return TailEval { tail: 0.0, cdf: 1.0 };
    }
    // Distances 1 and 2 share the single Exp(2) hold; route both through the
    // even branch so they agree bit for bit.
    let k = k.max(2) as usize;
    let m = k / 2;
    let ln_q = ln_one_minus_x(t);
    let even_cdf = (m as f64 * ln_q).exp();
    let even_tail = -(m as f64 * ln_q).exp_m1();
    if k.is_multiple_of(2) {
        return TailEval {
            tail: even_tail,
            cdf: even_cdf,
        };
    }
    let s = OddSeries::new(m, t);
    TailEval {
        tail: even_tail + s.extra_tail(),
        cdf: s.cdf(),
    }
}

/// Exact time derivative of `vhat(k, t)`, i.e. minus the density.
pub fn vhat_dt(k: i64, t: f64) -> f64 {
    if k <= 0 {
        return 0.0;
    }
    let k = k.max(2) as usize;
    let m = k / 2;
    if k.is_multiple_of(2) {
        // d/dt [1 - (1 - x)^m] with x = e^{-2t}
        if m == 1 {
            return -2.0 * (-2.0 * t).exp();
        }
        if t <= 0.0 {
            return 0.0;
        }
        let ln_q = ln_one_minus_x(t);
        return -2.0 * m as f64 * (-2.0 * t + (m - 1) as f64 * ln_q).exp();
    }
    if t <= 0.0 {
        return 0.0;
    }
    let s = OddSeries::new(m, t);
    -((4 * m + 2) as f64) * s.extra_tail()
}

/// `ln(e^{2t} - 1)`, finite for every finite `t > 0`.
fn ln_w(t: f64) -> f64 {
    2.0 * t + ln_one_minus_x(t)
}

/// `ln(1 - e^{-2t})` without cancellation near `t = 0`.
fn ln_one_minus_x(t: f64) -> f64 {
    let x = (-2.0 * t).exp();
    if x < 0.5 {
        (-x).ln_1p()
    } else {
        (-(-2.0 * t).exp_m1()).ln()
    }
}

/// Positive series for the odd start `k = 2m + 1`, `m >= 1`.
///
/// With `W = e^{2t} - 1`:
///   cdf        = (2m+1) sum_j C(m,j) W^{m+j+1}/(m+j+1) / (1+W)^{2m+1}
///   extra_tail = m      sum_j C(m,j) W^{m+j}  /(m+j)   / (1+W)^{2m+1}
/// and `tail(2m+1) = tail(2m) + extra_tail`.
struct OddSeries {
    ln_cdf: f64,
    ln_extra: f64,
}

impl OddSeries {
    fn new(m: usize, t: f64) -> Self {
        let ln_w = ln_w(t);
        // ln(1 + W) = 2t exactly
        let ln_norm = (2 * m + 1) as f64 * 2.0 * t;
        let mut ln_binom = 0.0f64;
        let mut cdf_terms = Vec::with_capacity(m + 1);
        let mut extra_terms = Vec::with_capacity(m + 1);
        for j in 0..=m {
            if j > 0 {
                ln_binom += ((m - j + 1) as f64 / j as f64).ln();
            }
            let p = (m + j) as f64;
            cdf_terms.push(ln_binom + (p + 1.0) * ln_w - (p + 1.0).ln());
            extra_terms.push(ln_binom + p * ln_w - p.ln());
        }
        Self {
            ln_cdf: ((2 * m + 1) as f64).ln() + log_sum_exp(&cdf_terms) - ln_norm,
            ln_extra: (m as f64).ln() + log_sum_exp(&extra_terms) - ln_norm,
        }
    }

    fn cdf(&self) -> f64 {
        self.ln_cdf.exp().min(1.0)
    }

    fn extra_tail(&self) -> f64 {
        self.ln_extra.exp()
    }
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + terms.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}
