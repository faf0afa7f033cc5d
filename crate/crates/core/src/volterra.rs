//! Volterra equations of the second kind
//! `φ(x) − ∫₀ˣ K(x,t) φ(t) dt = f(x)` with the separable kernel
//! `K(x,t) = α′(x) / (1 − α(x))`, plus a trapezoidal marching solver for
//! general kernels.

use std::fmt;

use crate::error::{domain, Result};
use crate::numerics::{integrate, QuadratureSpec};

type Func = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// Number of points on the audit grid over `[0, h]`.
pub const PROBE_POINTS: usize = 33;

/// A paired `(α, α′)` on `[0, h]`.
pub struct KernelFamily {
    alpha: Func,
    alpha_prime: Func,
    h: f64,
}

impl fmt::Debug for KernelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KernelFamily").field("h", &self.h).finish_non_exhaustive()
    }
}

fn probe_grid(h: f64) -> impl Iterator<Item = f64> {
    (0..PROBE_POINTS).map(move |i| h * i as f64 / (PROBE_POINTS - 1) as f64)
}

impl KernelFamily {
    /// Build a family, auditing `α ≠ 1` and the consistency of `α′` with `α`
    /// on the probe grid.
    pub fn new<A, P>(alpha: A, alpha_prime: P, h: f64) -> Result<Self>
    where
        A: Fn(f64) -> f64 + Send + Sync + 'static,
        P: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(h > 0.0) || !h.is_finite() {
            return domain(format!("kernel domain length must be positive, got {h}"));
        }
        let step = 1e-5 * h;
        for x in probe_grid(h) {
            let a = alpha(x);
            if !a.is_finite() || (1.0 - a).abs() < 1e-12 {
                return domain(format!("alpha({x}) = {a} is not admissible"));
            }
            // Central differences inside, second-order one-sided at the ends.
            let fd = if x - step < 0.0 {
                (-3.0 * a + 4.0 * alpha(x + step) - alpha(x + 2.0 * step)) / (2.0 * step)
            } else if x + step > h {
                (3.0 * a - 4.0 * alpha(x - step) + alpha(x - 2.0 * step)) / (2.0 * step)
            } else {
                (alpha(x + step) - alpha(x - step)) / (2.0 * step)
            };
            let ap = alpha_prime(x);
            if !((fd - ap).abs() <= 1e-6 * ap.abs().max(1.0)) {
                return domain(format!(
                    "alpha_prime({x}) = {ap} disagrees with finite difference {fd}"
                ));
            }
        }
        Ok(Self {
            alpha: Box::new(alpha),
            alpha_prime: Box::new(alpha_prime),
            h,
        })
    }

    /// `α ≡ 0`.
    pub fn zero(h: f64) -> Self {
        Self::new(|_| 0.0, |_| 0.0, h).unwrap()
    }

    /// `α(x) = x/2`.
    pub fn linear_half(h: f64) -> Result<Self> {
        Self::new(|x| 0.5 * x, |_| 0.5, h)
    }

    /// `α(x) = (1 − e^{−x})/2`.
    pub fn saturating(h: f64) -> Result<Self> {
        Self::new(|x| 0.5 * (1.0 - (-x).exp()), |x| 0.5 * (-x).exp(), h)
    }

    /// `α(x) = x²/3`.
    pub fn quadratic_third(h: f64) -> Result<Self> {
        Self::new(|x| x * x / 3.0, |x| 2.0 * x / 3.0, h)
    }

    /// `α(x) = −sin x`, a family with α < 0 on `(0, π)`.
    pub fn negative_sine(h: f64) -> Result<Self> {
        Self::new(|x| -x.sin(), |x| -x.cos(), h)
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn alpha(&self, x: f64) -> f64 {
        (self.alpha)(x)
    }

    pub fn alpha_prime(&self, x: f64) -> f64 {
        (self.alpha_prime)(x)
    }

    /// `K(x, t) = α′(x)/(1 − α(x))`; independent of `t`.
    pub fn kernel(&self, x: f64, _t: f64) -> f64 {
        self.alpha_prime(x) / (1.0 - self.alpha(x))
    }

    fn check_order(&self, x: f64, t: f64) -> Result<()> {
        let slack = 1e-12 * self.h;
        if !(t >= -slack && t <= x + slack && x <= self.h + slack) {
            return domain(format!("need 0 <= t <= x <= h, got t = {t}, x = {x}, h = {}", self.h));
        }
        Ok(())
    }
}

pub struct VolterraProblem {
    pub kernel: KernelFamily,
    f: Func,
}

impl fmt::Debug for VolterraProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VolterraProblem").field("kernel", &self.kernel).finish_non_exhaustive()
    }
}

impl VolterraProblem {
    pub fn new<F>(kernel: KernelFamily, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if let Some(x) = probe_grid(kernel.h).find(|&x| !f(x).is_finite()) {
            return domain(format!("forcing is not finite at x = {x}"));
        }
        Ok(Self {
            kernel,
            f: Box::new(f),
        })
    }

    pub fn forcing(&self, x: f64) -> f64 {
        (self.f)(x)
    }
}

/// Closed-form resolvent `R(x,t) = α′(x)(1 − α(t))/(1 − α(x))²`.
pub fn resolvent(k: &KernelFamily, x: f64, t: f64) -> Result<f64> {
    k.check_order(x, t)?;
    let d = 1.0 - k.alpha(x);
    Ok(k.alpha_prime(x) * (1.0 - k.alpha(t)) / (d * d))
}

/// Closed-form iterated kernel
/// `K_n(x,t) = α′(x) ln^{n−1}((1−α(t))/(1−α(x))) / ((n−1)! (1−α(x)))`.
pub fn iterated_kernel(k: &KernelFamily, n: u32, x: f64, t: f64) -> Result<f64> {
    if n == 0 {
        return domain("iterated kernel index starts at 1");
    }
    k.check_order(x, t)?;
    let d = 1.0 - k.alpha(x);
    let log = ((1.0 - k.alpha(t)) / d).ln();
    let mut fact = 1.0;
    for j in 2..n {
        fact *= j as f64;
    }
    Ok(k.alpha_prime(x) * log.powi(n as i32 - 1) / (fact * d))
}

/// Iterated kernel from the recursion `K_n(x,t) = ∫ₜˣ K(x,s) K_{n−1}(s,t) ds`
/// evaluated by nested quadrature.
pub fn iterated_kernel_quadrature(
    k: &KernelFamily,
    n: u32,
    x: f64,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if n == 0 {
        return domain("iterated kernel index starts at 1");
    }
    k.check_order(x, t)?;
    if n == 1 {
        return Ok(k.kernel(x, t));
    }
    let mut err = None;
    let v = integrate(
        |s| match iterated_kernel_quadrature(k, n - 1, s, t, spec) {
            Ok(inner) => k.kernel(x, s) * inner,
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        },
        t,
        x,
        spec,
    )?;
    match err {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// Partial Neumann sum `Σ_{n=1..N} K_n(x,t)`.
pub fn neumann_partial_sum(k: &KernelFamily, terms: u32, x: f64, t: f64) -> Result<f64> {
    (1..=terms).map(|n| iterated_kernel(k, n, x, t)).sum()
}

/// `φ(x) = f(x) + α′(x)/(1−α(x))² ∫₀ˣ f(t)(1 − α(t)) dt`.
pub fn solve_closed_form(p: &VolterraProblem, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    let k = &p.kernel;
    k.check_order(x, 0.0)?;
    let ap = k.alpha_prime(x);
    if ap == 0.0 {
        return Ok(p.forcing(x));
    }
    let integral = integrate(|t| p.forcing(t) * (1.0 - k.alpha(t)), 0.0, x, spec)?;
    let d = 1.0 - k.alpha(x);
    Ok(p.forcing(x) + ap / (d * d) * integral)
}

/// `φ(x) − ∫₀ˣ K(x,t) φ(t) dt − f(x)` for the closed-form `φ`.
pub fn closed_form_residual(p: &VolterraProblem, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    let phi = solve_closed_form(p, x, spec)?;
    let mut err = None;
    let integral = integrate(
        |t| match solve_closed_form(p, t, spec) {
            Ok(v) => p.kernel.kernel(x, t) * v,
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        },
        0.0,
        x,
        spec,
    )?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(phi - integral - p.forcing(x))
}

/// Grid solution returned by the marching solvers.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSolution {
    pub x: Vec<f64>,
    pub phi: Vec<f64>,
}

/// Trapezoidal marching for `φ(x) − ∫₀ˣ K(x,t) φ(t) dt = f(x)` on
/// `grid_n` uniform intervals of `[0, h]`.
pub fn solve_marching_general<K, F>(kernel: K, f: F, h: f64, grid_n: usize) -> Result<GridSolution>
where
    K: Fn(f64, f64) -> f64,
    F: Fn(f64) -> f64,
{
    if grid_n < 16 {
        return domain(format!("marching grid needs at least 16 intervals, got {grid_n}"));
    }
    if !(h > 0.0) {
        return domain("interval length must be positive");
    }
    let dx = h / grid_n as f64;
    let x: Vec<f64> = (0..=grid_n).map(|i| i as f64 * dx).collect();
    let mut phi = Vec::with_capacity(grid_n + 1);
    phi.push(f(0.0));
    for i in 1..=grid_n {
        let xi = x[i];
        let mut acc = 0.5 * kernel(xi, x[0]) * phi[0];
        for j in 1..i {
            acc += kernel(xi, x[j]) * phi[j];
        }
        let diag = 1.0 - 0.5 * dx * kernel(xi, xi);
        phi.push((f(xi) + dx * acc) / diag);
    }
    Ok(GridSolution { x, phi })
}

/// Marching solution of a [`VolterraProblem`].
pub fn solve_marching(p: &VolterraProblem, grid_n: usize) -> Result<GridSolution> {
    if p.kernel.alpha_prime(0.0) == 0.0 && probe_grid(p.kernel.h).all(|x| p.kernel.alpha_prime(x) == 0.0) {
        // Zero kernel: reproduce the forcing exactly.
        if grid_n < 16 {
            return domain(format!("marching grid needs at least 16 intervals, got {grid_n}"));
        }
        let dx = p.kernel.h / grid_n as f64;
        let x: Vec<f64> = (0..=grid_n).map(|i| i as f64 * dx).collect();
        let phi = x.iter().map(|&xi| p.forcing(xi)).collect();
        return Ok(GridSolution { x, phi });
    }
    solve_marching_general(|x, t| p.kernel.kernel(x, t), |x| p.forcing(x), p.kernel.h, grid_n)
}

/// Largest deviation of the marching solution from the closed form.
pub fn marching_error(p: &VolterraProblem, grid_n: usize, spec: &QuadratureSpec) -> Result<f64> {
    let sol = solve_marching(p, grid_n)?;
    let mut worst: f64 = 0.0;
    for (&x, &v) in sol.x.iter().zip(&sol.phi) {
        worst = worst.max((v - solve_closed_form(p, x, spec)?).abs());
    }
    Ok(worst)
}

/// Residual `x + ∫₀ˣ (s − x) sin s ds − sin x` of the equation solved by
/// `φ = sin`.
pub fn p4_residual(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return domain("p4_residual requires x >= 0");
    }
    let spec = QuadratureSpec::tight();
    let integral = integrate(|s| (s - x) * s.sin(), 0.0, x, &spec)?;
    Ok(x + integral - x.sin())
}

/// Marching solution of `φ(x) = x + ∫₀ˣ (s − x) φ(s) ds` on `[0, h]`.
pub fn p4_marching(h: f64, grid_n: usize) -> Result<GridSolution> {
    // Written as φ − ∫ K φ = f with K(x,s) = s − x.
    solve_marching_general(|x, s| s - x, |x| x, h, grid_n)
}
