//! Generator of the distance process and the Bellman certificate for the
//! optimal strategy.
//!
//! For any strategy the drift of `vhat` at distance `k` depends only on the
//! five jump rates of the distance process, which range over the polytope
//! `L_n` (nonnegative rates with `down2 + down1/2 <= k` and
//! `down2 + down1/2 + stay + up1/2 + up2 = n`). The certificate is that the
//! optimal strategy maximizes the drift deficit over `L_n` and makes the
//! Bellman equation `A vhat = d vhat / dt` hold with equality.

use num_rational::Ratio;
use serde::Serialize;

use super::law::{check_t, tail_curvature, tail_step, vhat_diff, vhat_dt};
use super::AnalyticError;

/// Membership tolerance for the polytope constraints.
pub const LN_TOLERANCE: f64 = 1e-9;

/// Jump rates `lambda(k, k + m)` for `m = -2..=2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaVector {
    pub n: usize,
    pub k: usize,
    pub down2: f64,
    pub down1: f64,
    pub stay: f64,
    pub up1: f64,
    pub up2: f64,
}

impl LambdaVector {
    pub fn zero(n: usize, k: usize) -> Self {
        Self {
            n,
            k,
            down2: 0.0,
            down1: 0.0,
            stay: 0.0,
            up1: 0.0,
            up2: 0.0,
        }
    }

    /// Rate for the jump `k -> k + m`.
    pub fn rate(&self, m: i32) -> f64 {
        match m {
            -2 => self.down2,
            -1 => self.down1,
            0 => self.stay,
            1 => self.up1,
            2 => self.up2,
            _ => 0.0,
        }
    }

    pub fn as_array(&self) -> [f64; 5] {
        [self.down2, self.down1, self.stay, self.up1, self.up2]
    }

    /// The rates `Q*` induces: pair matches at even `k`, independent singles
    /// at odd `k`, matched coordinates always synchronous.
    pub fn optimal(n: usize, k: usize) -> Self {
        let mut l = Self::zero(n, k);
        l.stay = (n - k.min(n)) as f64;
        if k % 2 == 1 {
            l.down1 = 2.0 * k as f64;
        } else {
            l.down2 = k as f64;
        }
        l
    }

    /// Checks membership in `L_n`.
    pub fn check(&self) -> Result<(), AnalyticError> {
        for (m, r) in (-2..=2).zip(self.as_array()) {
            if !(r >= -LN_TOLERANCE) {
                return Err(AnalyticError::OutsidePolytope {
                    constraint: "nonnegativity",
                    detail: format!("lambda(k, k{m:+}) = {r}"),
                });
            }
        }
        let downward = self.down2 + 0.5 * self.down1;
        if downward > self.k as f64 + LN_TOLERANCE {
            return Err(AnalyticError::OutsidePolytope {
                constraint: "down-rate bound",
                detail: format!("lambda(k,k-2) + lambda(k,k-1)/2 = {downward} > k = {}", self.k),
            });
        }
        let total = downward + self.stay + 0.5 * self.up1 + self.up2;
        if (total - self.n as f64).abs() > LN_TOLERANCE {
            return Err(AnalyticError::OutsidePolytope {
                constraint: "total-rate equality",
                detail: format!("weighted sum = {total}, expected n = {}", self.n),
            });
        }
        Ok(())
    }
}

/// `A vhat (k, t) = sum_m lambda(k, k+m) [vhat(k+m, t) - vhat(k, t)]`.
pub fn generator_apply(lambda: &LambdaVector, t: f64) -> Result<f64, AnalyticError> {
    lambda.check()?;
    check_t(t)?;
    let k = lambda.k as i64;
    Ok((-2..=2)
        .filter(|&m| m != 0)
        .map(|m| lambda.rate(m) * vhat_diff(k + m as i64, k, t))
        .sum())
}

/// `2[vhat(k) - vhat(k-1)] - [vhat(k) - vhat(k-2)]`: nonnegative for odd
/// `k`, nonpositive for even `k`.
pub fn parity_gap(k: usize, t: f64) -> f64 {
    tail_curvature(k as i64, t)
}

/// `|A^opt vhat(k, t) - d vhat(k, t) / dt|`.
pub fn bellman_residual(k: usize, t: f64) -> Result<f64, AnalyticError> {
    let lambda = LambdaVector::optimal(k.max(1), k);
    Ok((generator_apply(&lambda, t)? - vhat_dt(k as i64, t)).abs())
}

/// One basic feasible point of the rate polytope.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Vertex5 {
    pub lambda: LambdaVector,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpSolution {
    pub argmax: LambdaVector,
    pub value: f64,
    /// Every enumerated vertex attaining the maximum, including `argmax`.
    pub maximizers: Vec<LambdaVector>,
    pub vertices: Vec<Vertex5>,
}

impl LpSolution {
    pub fn is_unique(&self) -> bool {
        self.maximizers.len() == 1
    }
}

/// Objective of the rate maximization, split so that near-ties stay
/// resolvable.
///
/// With `D = down2 + down1/2` and `U = up1/2 + up2`, the drift deficit
/// `sum_m lambda(k,k+m) [vhat(k) - vhat(k+m)]` equals
/// `D c_down + down1 g_k / 2 + U c_up + up1 g_{k+2} / 2`, where
/// `c_down = vhat(k) - vhat(k-2)`, `c_up = vhat(k) - vhat(k+2)` and `g` is
/// the tail curvature. Pairs versus singles then differ by one curvature
/// term instead of a difference of two nearly equal products.
#[derive(Debug, Clone, Copy)]
struct Objective {
    c_down: f64,
    g_k: f64,
    c_up: f64,
    g_up: f64,
}

impl Objective {
    fn new(k: usize, t: f64) -> Self {
        let k = k as i64;
        Self {
            c_down: tail_step(k, t) + tail_step(k - 1, t),
            g_k: tail_curvature(k, t),
            c_up: -(tail_step(k + 1, t) + tail_step(k + 2, t)),
            g_up: tail_curvature(k + 2, t),
        }
    }

    fn terms(&self, l: &[f64; 5]) -> [f64; 4] {
        let d = l[0] + 0.5 * l[1];
        let u = 0.5 * l[3] + l[4];
        [
            d * self.c_down,
            0.5 * l[1] * self.g_k,
            u * self.c_up,
            0.5 * l[3] * self.g_up,
        ]
    }

    fn value(&self, l: &[f64; 5]) -> f64 {
        self.terms(l).iter().sum()
    }

    /// `value(a) - value(b)` and a rounding bound for it.
    fn compare(&self, a: &[f64; 5], b: &[f64; 5]) -> (f64, f64) {
        let diff: [f64; 5] = std::array::from_fn(|i| a[i] - b[i]);
        let terms = self.terms(&diff);
        let scale: f64 = terms.iter().map(|x| x.abs()).sum();
        (terms.iter().sum(), 64.0 * f64::EPSILON * scale)
    }
}

type R = Ratio<i64>;

/// Maximizes `sum_m lambda(k, k+m) [vhat(k) - vhat(k+m)]` over `L_n`.
///
/// With a slack variable the polytope is `{x >= 0 : A x = b}` for a 2x6
/// matrix, so its vertices are the nonnegative basic solutions over pairs of
/// columns. These are solved exactly in rationals; vertices are compared
/// pairwise through the curvature split of the objective.
///
/// Among tied maximizers the reported `argmax` is the one with the least
/// upward rate. `maximizers` lists them all.
pub fn maximize_over_ln(k: usize, t: f64, n: usize) -> Result<LpSolution, AnalyticError> {
    if k == 0 || k > n {
        return Err(AnalyticError::BadIndex {
            what: "k (need 1 <= k <= n)",
            value: k as i64,
        });
    }
    check_t(t)?;
    let half = R::new(1, 2);
    let one = R::from_integer(1);
    let zero = R::from_integer(0);
    // columns: down2, down1, stay, up1, up2, slack
    let row_down = [one, half, zero, zero, zero, one];
    let row_total = [one, half, one, half, one, zero];
    let rhs = [R::from_integer(k as i64), R::from_integer(n as i64)];

    let mut points: Vec<[R; 5]> = Vec::new();
    for a in 0..6 {
        for b in (a + 1)..6 {
            let det = row_down[a] * row_total[b] - row_down[b] * row_total[a];
            if det == zero {
                continue;
            }
            let xa = (rhs[0] * row_total[b] - row_down[b] * rhs[1]) / det;
            let xb = (row_down[a] * rhs[1] - rhs[0] * row_total[a]) / det;
            if xa < zero || xb < zero {
                continue;
            }
            let mut x = [zero; 6];
            x[a] = xa;
            x[b] = xb;
            let p = [x[0], x[1], x[2], x[3], x[4]];
            if !points.contains(&p) {
                points.push(p);
            }
        }
    }

    let objective = Objective::new(k, t);
    let to_f = |r: R| *r.numer() as f64 / *r.denom() as f64;
    let vertices: Vec<Vertex5> = points
        .iter()
        .map(|p| {
            let lambda = LambdaVector {
                n,
                k,
                down2: to_f(p[0]),
                down1: to_f(p[1]),
                stay: to_f(p[2]),
                up1: to_f(p[3]),
                up2: to_f(p[4]),
            };
            let value = objective.value(&lambda.as_array());
            Vertex5 { lambda, value }
        })
        .collect();

    let beats = |a: &Vertex5, b: &Vertex5| {
        let (d, tol) = objective.compare(&a.lambda.as_array(), &b.lambda.as_array());
        d > tol
    };
    let best = vertices
        .iter()
        .find(|v| !vertices.iter().any(|w| beats(w, v)))
        .expect("a finite vertex set has an undominated member");
    let mut maximizers: Vec<LambdaVector> = vertices
        .iter()
        .filter(|v| !beats(best, v))
        .map(|v| v.lambda)
        .collect();
    maximizers.sort_by(|a, b| {
        (a.up1 + a.up2)
            .total_cmp(&(b.up1 + b.up2))
            .then(b.stay.total_cmp(&a.stay))
    });
    Ok(LpSolution {
        argmax: maximizers[0],
        value: best.value,
        maximizers,
        vertices,
    })
}

/// Drift deficit `sum_m lambda(k,k+m) [vhat(k) - vhat(k+m)]` for a given
/// rate vector; `maximize_over_ln` returns its maximum over `L_n`.
pub fn drift_deficit(lambda: &LambdaVector, t: f64) -> Result<f64, AnalyticError> {
    Ok(-generator_apply(lambda, t)?)
}
