//! Bracketing root finder (Brent) and golden-section minimisation.

use crate::error::{Error, Result};

/// Find a root of `f` inside `bracket`, returning once the bracket is no
/// wider than `tol` (or `f` vanishes exactly).
pub fn find_root<F: FnMut(f64) -> f64>(mut f: F, bracket: (f64, f64), tol: f64) -> Result<f64> {
    let (lo, hi) = bracket;
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa * fb < 0.0) {
        return Err(Error::NoSignChange { lo, hi });
    }
    let tol = tol.max(0.0);
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..500 {
        if fb * fc > 0.0 {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.25 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b += d;
        } else {
            b += tol1.copysign(xm);
        }
        fb = f(b);
    }
    Ok(b)
}

/// Minimise a unimodal `f` on `[lo, hi]` by golden-section search.
/// Returns `(argmin, min)`.
pub fn minimize_golden<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (b - a).abs() > tol {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Scan `(lo, hi)` on a geometric grid of `n` points and return the first
/// sub-bracket across which `f` changes sign.
pub fn scan_bracket<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    n: usize,
) -> Option<(f64, f64)> {
    let ratio = (hi / lo).powf(1.0 / (n.max(2) - 1) as f64);
    let mut x_prev = lo;
    let mut f_prev = f(lo);
    for i in 1..n.max(2) {
        let x = if i == n.max(2) - 1 { hi } else { lo * ratio.powi(i as i32) };
        let fx = f(x);
        if f_prev * fx <= 0.0 {
            return Some((x_prev, x));
        }
        x_prev = x;
        f_prev = fx;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_two() {
        let r = find_root(|x| x * x - 2.0, (1.0, 2.0), 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn half_pi() {
        let r = find_root(f64::cos, (1.0, 2.0), 1e-14).unwrap();
        assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-14);
    }

    #[test]
    fn no_sign_change() {
        assert!(matches!(
            find_root(|x| x * x + 1.0, (-1.0, 1.0), 1e-10),
            Err(Error::NoSignChange { .. })
        ));
    }

    #[test]
    fn golden_section_parabola() {
        let (x, fx) = minimize_golden(|x| (x - 0.3).powi(2), -2.0, 5.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-8);
        assert!(fx.abs() < 1e-16);
    }

    #[test]
    fn bracket_scan_finds_sign_change() {
        let (lo, hi) = scan_bracket(|x| x - 3.0, 1.0, 100.0, 50).unwrap();
        assert!(lo <= 3.0 && hi >= 3.0);
    }

    proptest::proptest! {
        #[test]
        fn root_is_bracketed(root in -5.0f64..5.0, lo_off in 0.01f64..3.0, hi_off in 0.01f64..3.0) {
            let lo = root - lo_off;
            let hi = root + hi_off;
            let x = find_root(|x| (x - root) * (1.0 + x * x), (lo, hi), 1e-12).unwrap();
            proptest::prop_assert!(x >= lo && x <= hi);
            proptest::prop_assert!((x - root).abs() <= 1e-12);
        }
    }
}
