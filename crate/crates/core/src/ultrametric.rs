//! Exponential series `R(t) = Σ_{n≥0} a^{−n} e^{−b^{−n} t}` and
//! `S(t) = Σ_{n≥1} n^{−k} a^{−n} e^{−b^{−n} t}` with their large-`t`
//! power-law sandwiches.

use std::f64::consts::E;

use crate::error::{domain, Result};
use crate::numerics::gamma;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesParams {
    pub a: f64,
    pub b: f64,
    pub k: i32,
    pub tail_tol: f64,
}

impl SeriesParams {
    pub fn new(a: f64, b: f64, k: i32, tail_tol: f64) -> Result<Self> {
        if !(a > 1.0 && b > 1.0) {
            return domain(format!("need a > 1 and b > 1, got a = {a}, b = {b}"));
        }
        if !(tail_tol > 0.0) {
            return domain("tail tolerance must be positive");
        }
        Ok(Self { a, b, k, tail_tol })
    }

    /// Decay exponent `ln a / ln b`.
    pub fn exponent(&self) -> f64 {
        self.a.ln() / self.b.ln()
    }
}

/// Index of the last term needed at time `t`: the geometric tail beyond it
/// is below `tail_tol` and the crossover `n ≈ log_b t` has been passed by
/// ten terms.
pub fn terms_needed(p: &SeriesParams, t: f64) -> usize {
    let crossover = if t > 1.0 { t.ln() / p.b.ln() } else { 0.0 };
    let geometric = 1.0 / (1.0 - 1.0 / p.a);
    let mut n = 0usize;
    loop {
        let tail = p.a.powi(-(n as i32 + 1)) * geometric;
        if tail < p.tail_tol && n as f64 >= crossover + 10.0 {
            return n;
        }
        n += 1;
    }
}

fn term(p: &SeriesParams, n: usize, t: f64, weighted: bool) -> f64 {
    let nf = n as f64;
    let mut v = (-nf * p.a.ln() - t * (-nf * p.b.ln()).exp()).exp();
    if weighted {
        v *= nf.powi(-p.k);
    }
    v
}

/// `R(t)` summed through term `last` inclusive.
pub fn sum_r_terms(p: &SeriesParams, t: f64, last: usize) -> f64 {
    (0..=last).rev().map(|n| term(p, n, t, false)).sum()
}

/// `S(t)` summed through term `last` inclusive.
pub fn sum_s_terms(p: &SeriesParams, t: f64, last: usize) -> f64 {
    (1..=last).rev().map(|n| term(p, n, t, true)).sum()
}

pub fn sum_r(p: &SeriesParams, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return domain("R(t) requires t >= 0");
    }
    Ok(sum_r_terms(p, t, terms_needed(p, t)))
}

pub fn sum_s(p: &SeriesParams, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return domain("S(t) requires t >= 0");
    }
    Ok(sum_s_terms(p, t, terms_needed(p, t)))
}

/// `a^{∓1} (ln b)^{k−1} Γ(ln a/ln b) (ln t)^{−k} t^{−ln a/ln b}`.
pub fn asymptotic_bounds_s(p: &SeriesParams, t: f64) -> Result<(f64, f64)> {
    bounds(p, p.k, t)
}

/// The `k = 0` sandwich for `R`.
pub fn asymptotic_bounds_r(p: &SeriesParams, t: f64) -> Result<(f64, f64)> {
    bounds(p, 0, t)
}

fn bounds(p: &SeriesParams, k: i32, t: f64) -> Result<(f64, f64)> {
    if !(t > E) {
        return domain(format!("asymptotic bounds require t > e, got {t}"));
    }
    let z = p.exponent();
    let core = p.b.ln().powi(k - 1) * gamma(z)? * t.ln().powi(-k) * t.powf(-z);
    Ok((core / p.a, core * p.a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate_to_infinity, loglog_slope, QuadratureSpec};

    fn params(a: f64, b: f64, k: i32) -> SeriesParams {
        SeriesParams::new(a, b, k, 1e-16).unwrap()
    }

    #[test]
    fn values_at_zero() {
        assert!((sum_r(&params(2.0, 2.0, 0), 0.0).unwrap() - 2.0).abs() < 1e-15);
        assert!((sum_s(&params(2.0, 3.0, 1), 0.0).unwrap() - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn r_minus_s_is_leading_term() {
        for t in [0.0, 0.5, 3.0, 40.0] {
            let p = params(2.5, 1.7, 0);
            let d = sum_r(&p, t).unwrap() - sum_s(&p, t).unwrap();
            assert!((d - (-t).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn monotone_in_t() {
        let p = params(2.0, 2.0, 0);
        let mut prev = f64::INFINITY;
        for i in 0..60 {
            let v = sum_r(&p, 10f64.powf(i as f64 / 10.0)).unwrap();
            assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn doubling_terms_is_within_tolerance() {
        let p = SeriesParams::new(2.0, 3.0, 1, 1e-12).unwrap();
        for t in [1e3, 1e4, 1e6] {
            let n = terms_needed(&p, t);
            let d = (sum_s_terms(&p, t, 2 * n) - sum_s_terms(&p, t, n)).abs();
            assert!(d < p.tail_tol);
        }
    }

    #[test]
    fn bound_ratio_and_exponent() {
        let p = params(4.0, 2.0, 1);
        assert!((p.exponent() - 2.0).abs() < 1e-15);
        let (lo, hi) = asymptotic_bounds_s(&p, 1e4).unwrap();
        assert!((hi / lo - 16.0).abs() < 1e-12);
        assert!(asymptotic_bounds_s(&p, 2.0).is_err());
    }

    #[test]
    fn gamma_at_exponent_matches_quadrature() {
        let z = 2f64.ln() / 3f64.ln();
        let q = integrate_to_infinity(|y| y.powf(z - 1.0) * (-y).exp(), 0.0, &QuadratureSpec::tight()).unwrap();
        assert!((gamma(z).unwrap() / q - 1.0).abs() < 1e-9);
    }

    #[test]
    fn sandwich_holds() {
        for a in [2.0, 3.0] {
            for b in [2.0, 3.0] {
                for k in 0..=2 {
                    let p = params(a, b, k);
                    for e in 3..=6 {
                        let t = 10f64.powi(e);
                        let s = sum_s(&p, t).unwrap();
                        let (lo, hi) = asymptotic_bounds_s(&p, t).unwrap();
                        assert!(lo * 0.8 <= s && s <= hi * 1.2, "a={a} b={b} k={k} t={t}");
                    }
                }
            }
        }
    }

    #[test]
    fn r_decay_slope() {
        let p = params(2.0, 3.0, 0);
        let ts: Vec<f64> = (0..=30).map(|i| 10f64.powf(3.0 + i as f64 / 10.0)).collect();
        let rs: Vec<f64> = ts.iter().map(|&t| sum_r(&p, t).unwrap()).collect();
        assert!((loglog_slope(&ts, &rs) + p.exponent()).abs() < 0.02);
    }

    proptest::proptest! {
        #[test]
        fn s_nonincreasing(a in 1.2f64..4.0, b in 1.2f64..4.0, k in 0i32..3, t in 0.0f64..1e5, dt in 0.0f64..1e3) {
            let p = params(a, b, k);
            proptest::prop_assert!(sum_s(&p, t + dt).unwrap() <= sum_s(&p, t).unwrap() + 1e-15);
        }
    }
}
