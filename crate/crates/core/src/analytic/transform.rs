//! Laplace transforms of the tail and the recursions they satisfy.
//!
//! `V_alpha(k) = int_0^inf e^{-alpha t} vhat(k, t) dt`, `D_alpha(k) =
//! V_alpha(k) - V_alpha(k - 1)`. The recursions below follow from the
//! death rates of the optimal chain and hold exactly; their residuals only
//! measure floating error.

use serde::Serialize;

use super::law::tail_step;
use super::AnalyticError;

fn check_alpha(alpha: f64) -> Result<(), AnalyticError> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(AnalyticError::BadAlpha(alpha));
    }
    Ok(())
}

/// `ln prod_{i=1}^m 2i / (2i + alpha)`.
fn ln_phi(m: usize, alpha: f64) -> f64 {
    (1..=m).map(|i| -(alpha / (2.0 * i as f64)).ln_1p()).sum()
}

pub fn phi_alpha(m: usize, alpha: f64) -> Result<f64, AnalyticError> {
    check_alpha(alpha)?;
    Ok(ln_phi(m, alpha).exp())
}

/// Product form of the transform. `1 - E[e^{-alpha tau}]` goes through
/// `expm1` so small `alpha` does not cancel.
pub fn v_alpha(k: i64, alpha: f64) -> Result<f64, AnalyticError> {
    check_alpha(alpha)?;
    if k <= 0 {
        return Ok(0.0);
    }
    let k = k as usize;
    let m = k / 2;
    let mut ln_mgf = ln_phi(m, alpha);
    if k % 2 == 1 {
        ln_mgf += -(alpha / (4 * m + 2) as f64).ln_1p();
    }
    Ok(-ln_mgf.exp_m1() / alpha)
}

pub fn d_alpha(k: i64, alpha: f64) -> Result<f64, AnalyticError> {
    Ok(v_alpha(k, alpha)? - v_alpha(k - 1, alpha)?)
}

/// Residuals of the transform recursions at a given `m` and `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityResiduals {
    pub m: usize,
    pub alpha: f64,
    /// `1 - a V(2m) + 2m [V(2m-2) - V(2m)]`
    pub imp_v1: f64,
    /// `1 - a V(2m-1) + 2(2m-1) [V(2m-2) - V(2m-1)]`
    pub imp_v2: f64,
    /// `D(2m-1) - D(2m) - (2+a)/(2m-2) D(2m)`; undefined at `m = 1`.
    pub d_even: Option<f64>,
    /// `(2m-2) D(2m-1) - (2m+a) D(2m)`; skipped at `m = 1` with `d_even`.
    pub ident: Option<f64>,
    /// `D(2m+1) - D(2m) - 2/(4m+2+a) [D(2m-1) - D(2m)]`
    pub d_odd: f64,
}

impl IdentityResiduals {
    pub fn entries(&self) -> Vec<(&'static str, f64)> {
        let mut out = vec![("imp_v1", self.imp_v1), ("imp_v2", self.imp_v2)];
        if let Some(r) = self.d_even {
            out.push(("d_even", r));
        }
        if let Some(r) = self.ident {
            out.push(("ident", r));
        }
        out.push(("d_odd", self.d_odd));
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.entries()
            .into_iter()
            .map(|(_, r)| r.abs())
            .fold(0.0, f64::max)
    }
}

pub fn check_laplace_identities(m: usize, alpha: f64) -> Result<IdentityResiduals, AnalyticError> {
    check_alpha(alpha)?;
    if m == 0 {
        return Err(AnalyticError::BadIndex { what: "m", value: 0 });
    }
    let mi = m as i64;
    let mf = m as f64;
    let v = |k: i64| v_alpha(k, alpha);
    let d = |k: i64| d_alpha(k, alpha);

    let imp_v1 = 1.0 - alpha * v(2 * mi)? + 2.0 * mf * (v(2 * mi - 2)? - v(2 * mi)?);
    let imp_v2 = 1.0 - alpha * v(2 * mi - 1)? + 2.0 * (2.0 * mf - 1.0) * (v(2 * mi - 2)? - v(2 * mi - 1)?);
    let (d_even, ident) = if m >= 2 {
        let (d_odd_prev, d_even_here) = (d(2 * mi - 1)?, d(2 * mi)?);
        (
            Some(d_odd_prev - d_even_here - (2.0 + alpha) / (2.0 * mf - 2.0) * d_even_here),
            Some((2.0 * mf - 2.0) * d_odd_prev - (2.0 * mf + alpha) * d_even_here),
        )
    } else {
        (None, None)
    };
    let d_odd = d(2 * mi + 1)? - d(2 * mi)? - 2.0 / (4.0 * mf + 2.0 + alpha) * (d(2 * mi - 1)? - d(2 * mi)?);
    Ok(IdentityResiduals {
        m,
        alpha,
        imp_v1,
        imp_v2,
        d_even,
        ident,
        d_odd,
    })
}

/// `theta(2m, t) = P(E_1 + ... + E_m > t) - P(E_1 + ... + E_{m-1} + E_{2m-1} > t)`
/// with `E_i ~ Exp(2i)`, which is `vhat(2m, t) - vhat(2m - 1, t)`.
pub fn theta(m: usize, t: f64) -> Result<f64, AnalyticError> {
    if m == 0 {
        return Err(AnalyticError::BadIndex { what: "m", value: 0 });
    }
    super::law::check_t(t)?;
    Ok(tail_step(2 * m as i64, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::law::vhat;
    use crate::stats::integrate_to_infinity;

    #[test]
    fn transform_examples() {
        assert!((v_alpha(2, 2.0).unwrap() - 0.25).abs() < 1e-15);
        assert!((phi_alpha(2, 2.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        for &a in &[0.01, 0.5, 2.0, 70.0] {
            assert_eq!(d_alpha(2, a).unwrap(), 0.0);
            let expect = 1.0 / (2.0 + a);
            assert!((v_alpha(2, a).unwrap() - expect).abs() < 1e-15);
        }
        assert!(matches!(v_alpha(3, 0.0), Err(AnalyticError::BadAlpha(_))));
        assert!(matches!(v_alpha(3, -1.0), Err(AnalyticError::BadAlpha(_))));
    }

    #[test]
    fn m1_imp_v1_by_hand() {
        let r = check_laplace_identities(1, 1.0).unwrap();
        // 1 - V(2) - 2 V(2) with V(2) = 1/3
        assert!(r.imp_v1.abs() < 1e-15);
        assert!(r.d_even.is_none() && r.ident.is_none());
    }

    /// Exact rational evaluation at small m: V(k) = (1 - prod r/(r+a)) / a.
    #[test]
    fn m2_against_rational_arithmetic() {
        use num_rational::Ratio;
        type Q = Ratio<i128>;
        let a = Q::from_integer(1);
        let v = |k: i64| -> Q {
            if k <= 0 {
                return Q::from_integer(0);
            }
            let m = k / 2;
            let mut p = Q::from_integer(1);
            for i in 1..=m {
                p *= Q::from_integer(2 * i as i128) / (Q::from_integer(2 * i as i128) + a);
            }
            if k % 2 == 1 {
                let r = Q::from_integer((4 * m + 2) as i128);
                p *= r / (r + a);
            }
            (Q::from_integer(1) - p) / a
        };
        for k in 0..=6 {
            let exact = v(k);
            let approx = *exact.numer() as f64 / *exact.denom() as f64;
            assert!((v_alpha(k, 1.0).unwrap() - approx).abs() < 1e-15);
        }
        let d = |k: i64| v(k) - v(k - 1);
        let two = Q::from_integer(2);
        assert_eq!(d(3) - d(4) - (two + a) / two * d(4), Q::from_integer(0));
        assert_eq!(two * d(3) - (Q::from_integer(4) + a) * d(4), Q::from_integer(0));
        assert_eq!(
            d(5) - d(4) - two / (Q::from_integer(10) + a) * (d(3) - d(4)),
            Q::from_integer(0)
        );
        let r = check_laplace_identities(2, 1.0).unwrap();
        assert!(r.max_abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn quadrature_of_tail_matches_transform() {
        for k in 1..=20i64 {
            for &a in &[0.1, 1.0, 10.0] {
                let quad = integrate_to_infinity(|t| (-a * t).exp() * vhat(k, t), 1e-12);
                let closed = v_alpha(k, a).unwrap();
                assert!((quad - closed).abs() < 1e-8, "k={k} a={a}: {quad} vs {closed}");
            }
        }
    }

    #[test]
    fn theta_behaviour() {
        for m in 1..=10 {
            assert_eq!(theta(m, 0.0).unwrap(), 0.0);
            assert!(theta(m, 50.0).unwrap().abs() < 1e-12);
        }
        assert!(theta(2, 0.5).unwrap() > 0.0);
        assert_eq!(theta(1, 0.7).unwrap(), 0.0);
        for m in 2..=20 {
            for i in 0..40 {
                let t = 1e-3 * 1.25f64.powi(i);
                assert!(theta(m, t).unwrap() > 0.0, "m={m} t={t}");
            }
        }
    }

    #[test]
    fn transform_sign_consequences() {
        for m in 1..=50i64 {
            for &a in &[0.01, 0.1, 1.0, 10.0, 100.0] {
                let d_prev = d_alpha(2 * m - 1, a).unwrap();
                let d_here = d_alpha(2 * m, a).unwrap();
                let d_next = d_alpha(2 * m + 1, a).unwrap();
                assert!(d_prev - d_here >= -1e-15, "m={m} a={a}");
                assert!(d_next - d_here >= -1e-15, "m={m} a={a}");
            }
        }
    }
}
