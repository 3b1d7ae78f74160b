//! Small numerical and statistical helpers: time grids, compensated sums,
//! confidence bands, the two-sample Kolmogorov-Smirnov statistic, and
//! adaptive Gauss-Kronrod quadrature.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("grid needs start < stop, got {start}..{stop}")]
    EmptyRange { start: f64, stop: f64 },
    #[error("log grid needs a positive start, got {0}")]
    NonPositiveStart(f64),
    #[error("grid step/count must be positive")]
    BadStep,
}

/// `count` log-spaced points from `start` to `stop` inclusive.
pub fn log_grid(start: f64, stop: f64, count: usize) -> Result<Vec<f64>, GridError> {
    if !(start > 0.0) {
        return Err(GridError::NonPositiveStart(start));
    }
    if !(start < stop) {
        return Err(GridError::EmptyRange { start, stop });
    }
    if count < 2 {
        return Err(GridError::BadStep);
    }
    let (a, b) = (start.ln(), stop.ln());
    Ok((0..count)
        .map(|i| {
            if i == 0 {
                start
            } else if i + 1 == count {
                stop
            } else {
                (a + (b - a) * i as f64 / (count - 1) as f64).exp()
            }
        })
        .collect())
}

/// `start, start + step, ...` up to and including `stop` (within half a step
/// of rounding).
pub fn linear_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, GridError> {
    if !(step > 0.0) {
        return Err(GridError::BadStep);
    }
    if !(start <= stop) {
        return Err(GridError::EmptyRange { start, stop });
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start + step * i as f64).collect())
}

/// Neumaier-compensated summation.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Pointwise 95% normal-approximation half-width for a proportion.
pub fn normal_half_width(p: f64, n: usize) -> f64 {
    1.959963984540054 * (p * (1.0 - p) / n as f64).sqrt()
}

/// Simultaneous Dvoretzky-Kiefer-Wolfowitz band half-width at confidence
/// `1 - delta` (Massart constant).
pub fn dkw_half_width(n: usize, delta: f64) -> f64 {
    ((2.0 / delta).ln() / (2.0 * n as f64)).sqrt()
}

/// Asymptotic critical value of the two-sample KS statistic at level `alpha`.
pub fn ks_critical_value(alpha: f64, n: usize, m: usize) -> f64 {
    let c = (-(alpha / 2.0).ln() / 2.0).sqrt();
    c * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}

/// Two-sample KS statistic `sup_t |F_a(t) - F_b(t)|`. Ties are handled by
/// advancing both samples past equal values before comparing.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty(), "KS needs nonempty samples");
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut stat = 0.0f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        stat = stat.max((i as f64 / na - j as f64 / nb).abs());
    }
    stat
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (i, &x) in XGK.iter().enumerate().take(7) {
        let pair = f(c - h * x) + f(c + h * x);
        kronrod += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Globally adaptive G7-K15 quadrature on `[a, b]` to absolute tolerance
/// `tol`: the interval with the largest error estimate is bisected until the
/// summed estimate drops below `tol` or the rounding floor.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    const MAX_INTERVALS: usize = 4000;
    let (v, e) = gauss_kronrod(&f, a, b);
    let mut parts = vec![(a, b, v, e)];
    loop {
        let total = compensated_sum(parts.iter().map(|p| p.2));
        let err: f64 = parts.iter().map(|p| p.3).sum();
        if err <= tol || err <= 1e-15 * total.abs() || parts.len() >= MAX_INTERVALS {
            return total;
        }
        let (idx, _) = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("nonempty");
        let (lo, hi, _, _) = parts.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        if !(lo < mid && mid < hi) {
            return total;
        }
        let (v1, e1) = gauss_kronrod(&f, lo, mid);
        let (v2, e2) = gauss_kronrod(&f, mid, hi);
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
}

/// `int_0^inf f(t) dt` through the map `t = u / (1 - u)`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, tol: f64) -> f64 {
    integrate(
        |u| {
            let w = 1.0 - u;
            let x = u / w;
            if !x.is_finite() {
                return 0.0;
            }
            f(x) / (w * w)
        },
        0.0,
        1.0,
        tol,
    )
}
