//! Two-Higgs-doublet potential
//!
//! `V = −μ₁²|φ₁|² − μ₂²|φ₂|² − μ₁₂² φ₁†φ₂ − (μ₁₂²)* φ₂†φ₁ + λ₁|φ₁|⁴ + λ₂|φ₂|⁴
//!     + λ₃|φ₁|²|φ₂|² + λ₄ |φ₁†φ₂|² + ½λ₅(φ₁†φ₂)² + ½λ₅*(φ₂†φ₁)²`
//!
//! evaluated directly on vacuum configurations, with the analytic Hessian of
//! the aligned vacuum and its stability predicates.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::numerics::RandomStream;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoHiggsParams {
    pub mu1_sq: f64,
    pub mu2_sq: f64,
    pub mu12_sq: Complex64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub lambda4: f64,
    pub lambda5: Complex64,
}

impl TwoHiggsParams {
    pub fn zero() -> Self {
        Self {
            mu1_sq: 0.0,
            mu2_sq: 0.0,
            mu12_sq: Complex64::new(0.0, 0.0),
            lambda1: 0.0,
            lambda2: 0.0,
            lambda3: 0.0,
            lambda4: 0.0,
            lambda5: Complex64::new(0.0, 0.0),
        }
    }

    /// `λ₃₄₅ = λ₃ + λ₄ + Re λ₅`.
    pub fn lambda345(&self) -> f64 {
        self.lambda3 + self.lambda4 + self.lambda5.re
    }

    /// Replace `μ₁²`, `μ₂²` by the values that make `(v₁, v₂)` a stationary
    /// point of the aligned potential.
    pub fn with_tadpoles_solved(mut self, v1: f64, v2: f64) -> Result<Self> {
        if !(v1 > 0.0 && v2 > 0.0) {
            return domain("tadpole conditions need v1 > 0 and v2 > 0");
        }
        let m = self.mu12_sq.re;
        let l345 = self.lambda345();
        self.mu1_sq = -m * v2 / v1 + self.lambda1 * v1 * v1 + 0.5 * l345 * v2 * v2;
        self.mu2_sq = -m * v1 / v2 + self.lambda2 * v2 * v2 + 0.5 * l345 * v1 * v1;
        Ok(self)
    }

    /// Random couplings with every entry uniform in `[-2, 2]`.
    pub fn random(stream: &mut RandomStream, complex: bool) -> Self {
        let mut u = || stream.uniform_in(-2.0, 2.0);
        let mu1_sq = u();
        let mu2_sq = u();
        let mu12_re = u();
        let mu12_im = u();
        let lambda1 = u();
        let lambda2 = u();
        let lambda3 = u();
        let lambda4 = u();
        let l5_re = u();
        let l5_im = u();
        let im = if complex { 1.0 } else { 0.0 };
        Self {
            mu1_sq,
            mu2_sq,
            mu12_sq: Complex64::new(mu12_re, im * mu12_im),
            lambda1,
            lambda2,
            lambda3,
            lambda4,
            lambda5: Complex64::new(l5_re, im * l5_im),
        }
    }
}

/// `⟨φ₁⟩ = (0, v₁)/√2`, `⟨φ₂⟩ = (v₂′, a e^{iθ})/√2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VevConfig {
    pub v1: f64,
    pub v2_prime: f64,
    pub a: f64,
    pub theta: f64,
}

impl VevConfig {
    pub fn aligned(v1: f64, v2: f64) -> Self {
        Self {
            v1,
            v2_prime: 0.0,
            a: v2,
            theta: 0.0,
        }
    }

    /// `v₂² = v₂′² + a²`.
    pub fn v2_sq(&self) -> f64 {
        self.v2_prime * self.v2_prime + self.a * self.a
    }
}

/// The potential evaluated on a vacuum configuration.
pub fn potential_on_vevs(p: &TwoHiggsParams, c: &VevConfig) -> f64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let phi1 = [Complex64::new(0.0, 0.0), Complex64::new(s * c.v1, 0.0)];
    let phi2 = [
        Complex64::new(s * c.v2_prime, 0.0),
        Complex64::from_polar(s * c.a, c.theta),
    ];
    let dot = |x: &[Complex64; 2], y: &[Complex64; 2]| x[0].conj() * y[0] + x[1].conj() * y[1];
    let n1 = dot(&phi1, &phi1).re;
    let n2 = dot(&phi2, &phi2).re;
    let x12 = dot(&phi1, &phi2);
    let x21 = x12.conj();
    let cross = -p.mu12_sq * x12 - p.mu12_sq.conj() * x21
        + 0.5 * p.lambda5 * x12 * x12
        + 0.5 * p.lambda5.conj() * x21 * x21;
    -p.mu1_sq * n1 - p.mu2_sq * n2
        + p.lambda1 * n1 * n1
        + p.lambda2 * n2 * n2
        + p.lambda3 * n1 * n2
        + p.lambda4 * x12.norm_sqr()
        + cross.re
}

/// θ- and `a`-dependent part of the potential in its reduced trigonometric
/// form, for comparison against direct evaluation.
pub fn theta_structure(p: &TwoHiggsParams, v1: f64, a: f64, theta: f64) -> f64 {
    let m = p.mu12_sq;
    let l5 = p.lambda5;
    -m.re * v1 * a * theta.cos() + m.im * v1 * a * theta.sin() + 0.25 * p.lambda4 * v1 * v1 * a * a
        + 0.25 * l5.re * v1 * v1 * a * a * (2.0 * theta).cos()
        - 0.25 * l5.im * v1 * v1 * a * a * (2.0 * theta).sin()
}

/// Analytic `∂V/∂θ` at `θ = 0`.
pub fn dv_dtheta_at_zero(p: &TwoHiggsParams, v1: f64, a: f64) -> f64 {
    p.mu12_sq.im * v1 * a - 0.5 * p.lambda5.im * v1 * v1 * a * a
}

/// Analytic `∂²V/∂θ²` at `θ = 0`.
pub fn d2v_dtheta2_at_zero(p: &TwoHiggsParams, v1: f64, a: f64) -> f64 {
    p.mu12_sq.re * v1 * a - p.lambda5.re * v1 * v1 * a * a
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Alignment {
    /// `Re λ₅ − Re μ₁₂²/(v₁ a) < 0`.
    pub theta_stable: bool,
    /// `Re λ₅ < 0`.
    pub bounded_phase: bool,
    /// `λ₄ + Re λ₅ < 0`.
    pub funnel_to_lower: bool,
}

pub fn alignment_conditions(p: &TwoHiggsParams, v1: f64, a: f64) -> Result<Alignment> {
    if v1 * a == 0.0 {
        return domain("phase-stability condition needs v1 * a != 0");
    }
    Ok(Alignment {
        theta_stable: p.lambda5.re - p.mu12_sq.re / (v1 * a) < 0.0,
        bounded_phase: p.lambda5.re < 0.0,
        funnel_to_lower: p.lambda4 + p.lambda5.re < 0.0,
    })
}

pub type Matrix2 = [[f64; 2]; 2];

/// Hessian of the aligned potential at its stationary point `(v₁, v₂)`.
pub fn hessian(p: &TwoHiggsParams, v1: f64, v2: f64) -> Result<Matrix2> {
    if !(v1 > 0.0 && v2 > 0.0) {
        return domain(format!("Hessian needs v1, v2 > 0, got ({v1}, {v2})"));
    }
    let m = p.mu12_sq.re;
    let off = -m + p.lambda345() * v1 * v2;
    Ok([
        [2.0 * p.lambda1 * v1 * v1 + m * v2 / v1, off],
        [off, 2.0 * p.lambda2 * v2 * v2 + m * v1 / v2],
    ])
}

/// Central-difference Hessian of the aligned potential in `(v₁, v₂)`.
pub fn finite_difference_hessian(p: &TwoHiggsParams, v1: f64, v2: f64, h: f64) -> Matrix2 {
    let v = |x: f64, y: f64| potential_on_vevs(p, &VevConfig::aligned(x, y));
    let c = v(v1, v2);
    let h11 = (v(v1 + h, v2) - 2.0 * c + v(v1 - h, v2)) / (h * h);
    let h22 = (v(v1, v2 + h) - 2.0 * c + v(v1, v2 - h)) / (h * h);
    let h12 = (v(v1 + h, v2 + h) - v(v1 + h, v2 - h) - v(v1 - h, v2 + h) + v(v1 - h, v2 - h)) / (4.0 * h * h);
    [[h11, h12], [h12, h22]]
}

/// Eigenvalues of a symmetric 2×2 matrix, ascending.
pub fn symmetric_eigenvalues(m: &Matrix2) -> (f64, f64) {
    let mean = 0.5 * (m[0][0] + m[1][1]);
    let half_diff = 0.5 * (m[0][0] - m[1][1]);
    let r = half_diff.hypot(m[0][1]);
    (mean - r, mean + r)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport {
    pub aligned_theta_stable: bool,
    pub re_lambda5_neg: bool,
    pub l4_plus_l5_neg: bool,
    pub trace_pos: bool,
    pub det_nonneg: bool,
    pub hessian: Matrix2,
    pub eigenvalues: (f64, f64),
}

impl StabilityReport {
    /// Local minimum of the aligned potential: trace positive and
    /// determinant nonnegative.
    pub fn locally_stable(&self) -> bool {
        self.trace_pos && self.det_nonneg
    }
}

pub fn stability_check(p: &TwoHiggsParams, v1: f64, v2: f64) -> Result<StabilityReport> {
    let h = hessian(p, v1, v2)?;
    let align = alignment_conditions(p, v1, v2)?;
    let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    Ok(StabilityReport {
        aligned_theta_stable: align.theta_stable,
        re_lambda5_neg: align.bounded_phase,
        l4_plus_l5_neg: align.funnel_to_lower,
        trace_pos: h[0][0] + h[1][1] > 0.0,
        det_nonneg: det >= 0.0,
        hessian: h,
        eigenvalues: symmetric_eigenvalues(&h),
    })
}

/// Stability conditions when `Re μ₁₂² = 0`:
/// `4λ₁λ₂ ≥ λ₃₄₅²`, `λ₁ > 0`, `λ₂ > 0`.
pub fn reduced_stability(p: &TwoHiggsParams) -> bool {
    let l345 = p.lambda345();
    4.0 * p.lambda1 * p.lambda2 >= l345 * l345 && p.lambda1 > 0.0 && p.lambda2 > 0.0
}

/// Directional probe of the aligned potential around `(v₁, v₂)`: returns
/// the smallest change `V(v + δu) − V(v)` over `directions` unit vectors.
pub fn min_directional_rise(p: &TwoHiggsParams, v1: f64, v2: f64, delta: f64, directions: usize) -> f64 {
    let v = |x: f64, y: f64| potential_on_vevs(p, &VevConfig::aligned(x, y));
    let c = v(v1, v2);
    (0..directions)
        .map(|i| {
            let ang = std::f64::consts::TAU * i as f64 / directions as f64;
            0.5 * (v(v1 + delta * ang.cos(), v2 + delta * ang.sin())
                + v(v1 - delta * ang.cos(), v2 - delta * ang.sin()))
                - c
        })
        .fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChargedRotation {
    pub beta: f64,
    pub rotation: Matrix2,
    /// Coefficients of `(φ₁⁺, φ₂⁺)` in the physical charged field.
    pub charged_coeffs: (f64, f64),
}

/// Rotation by `β = atan2(v₂, v₁)` that moves the whole vev into the first
/// component.
pub fn charged_higgs_rotation(v1: f64, v2: f64) -> Result<ChargedRotation> {
    if v1 == 0.0 && v2 == 0.0 {
        return Err(Error::DegenerateVev);
    }
    if v1 < 0.0 || v2 < 0.0 {
        return domain("vevs must be nonnegative");
    }
    let beta = v2.atan2(v1);
    let (s, c) = beta.sin_cos();
    Ok(ChargedRotation {
        beta,
        rotation: [[c, s], [-s, c]],
        charged_coeffs: (s, -c),
    })
}

/// True when a complex phase survives in `μ₁₂²` or `λ₅`.
pub fn cp_violation_flag(p: &TwoHiggsParams) -> bool {
    p.mu12_sq.im != 0.0 || p.lambda5.im != 0.0
}

/// Minimiser of `V(a, θ)` over a uniform θ grid on `[0, 2π)`.
pub fn theta_scan_minimizer(p: &TwoHiggsParams, v1: f64, a: f64, points: usize) -> f64 {
    let mut best = (0.0, f64::INFINITY);
    for i in 0..points {
        let theta = std::f64::consts::TAU * i as f64 / points as f64;
        let v = potential_on_vevs(
            p,
            &VevConfig {
                v1,
                v2_prime: 0.0,
                a,
                theta,
            },
        );
        if v < best.1 {
            best = (theta, v);
        }
    }
    best.0
}

/// Largest entry of `|A − B|` divided by the largest entry of `|A|`.
pub fn relative_matrix_error(a: &Matrix2, b: &Matrix2) -> f64 {
    let scale = a.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
    let diff = a.iter().flatten().zip(b.iter().flatten()).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    diff / scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, TAU};

    fn stream() -> RandomStream {
        RandomStream::new(2024, 8)
    }

    #[test]
    fn zero_couplings() {
        let c = VevConfig {
            v1: 1.3,
            v2_prime: 0.4,
            a: 0.7,
            theta: 0.9,
        };
        assert_eq!(potential_on_vevs(&TwoHiggsParams::zero(), &c), 0.0);
    }

    #[test]
    fn theta_structure_matches_direct_evaluation() {
        let mut s = stream();
        for _ in 0..200 {
            let p = TwoHiggsParams::random(&mut s, true);
            let (v1, a, v2p) = (s.uniform_in(0.1, 2.0), s.uniform_in(0.1, 2.0), s.uniform_in(-1.0, 1.0));
            let theta = s.uniform_in(0.0, TAU);
            let direct = |th| potential_on_vevs(&p, &VevConfig { v1, v2_prime: v2p, a, theta: th });
            let lhs = direct(theta) - direct(0.0);
            let rhs = theta_structure(&p, v1, a, theta) - theta_structure(&p, v1, a, 0.0);
            assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()), "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn theta_derivative_at_zero() {
        let mut s = stream();
        for _ in 0..50 {
            let p = TwoHiggsParams::random(&mut s, true);
            let (v1, a) = (s.uniform_in(0.1, 2.0), s.uniform_in(0.1, 2.0));
            let h = 1e-5;
            let v = |th| potential_on_vevs(&p, &VevConfig { v1, v2_prime: 0.0, a, theta: th });
            let fd = (v(h) - v(-h)) / (2.0 * h);
            assert!((fd - dv_dtheta_at_zero(&p, v1, a)).abs() < 1e-8);
        }
    }

    #[test]
    fn alignment_sign_reading() {
        let mut p = TwoHiggsParams::zero();
        p.lambda5 = Complex64::new(-1.0, 0.0);
        let al = alignment_conditions(&p, 1.0, 1.0).unwrap();
        assert!(al.theta_stable && al.bounded_phase && al.funnel_to_lower);
        p.lambda5 = Complex64::new(0.1, 0.0);
        assert!(!alignment_conditions(&p, 1.0, 1.0).unwrap().bounded_phase);
        assert!(alignment_conditions(&p, 0.0, 1.0).is_err());
    }

    #[test]
    fn theta_stability_matches_curvature() {
        let mut s = stream();
        for _ in 0..200 {
            let p = TwoHiggsParams::random(&mut s, true);
            let (v1, a) = (s.uniform_in(0.1, 2.0), s.uniform_in(0.1, 2.0));
            let h = 1e-4;
            let v = |th| potential_on_vevs(&p, &VevConfig { v1, v2_prime: 0.0, a, theta: th });
            let curv = (v(h) - 2.0 * v(0.0) + v(-h)) / (h * h);
            assert!((curv - d2v_dtheta2_at_zero(&p, v1, a)).abs() < 1e-5);
            if curv.abs() > 1e-4 {
                assert_eq!(alignment_conditions(&p, v1, a).unwrap().theta_stable, curv > 0.0);
            }
        }
    }

    #[test]
    fn hessian_basics() {
        let mut p = TwoHiggsParams::zero();
        p.lambda1 = 1.5;
        p.lambda2 = 0.5;
        let h = hessian(&p, 2.0, 3.0).unwrap();
        assert_eq!(h, [[12.0, 0.0], [0.0, 9.0]]);
        let p = TwoHiggsParams::random(&mut stream(), true);
        let h = hessian(&p, 0.7, 1.9).unwrap();
        assert_eq!(h[0][1], h[1][0]);
        assert!(hessian(&p, 0.0, 1.0).is_err());
    }

    #[test]
    fn hessian_matches_finite_differences() {
        let mut s = stream();
        for _ in 0..100 {
            let (v1, v2) = (s.uniform_in(0.2, 2.0), s.uniform_in(0.2, 2.0));
            let p = TwoHiggsParams::random(&mut s, true).with_tadpoles_solved(v1, v2).unwrap();
            let fd = finite_difference_hessian(&p, v1, v2, 1e-4);
            let an = hessian(&p, v1, v2).unwrap();
            assert!(relative_matrix_error(&an, &fd) <= 1e-6);
        }
    }

    #[test]
    fn stability_examples() {
        let mut p = TwoHiggsParams::zero();
        p.lambda1 = 1.0;
        p.lambda2 = 1.0;
        let r = stability_check(&p, 1.0, 1.0).unwrap();
        assert!(r.locally_stable());
        assert_eq!(r.eigenvalues, (2.0, 2.0));
        p.lambda1 = 0.1;
        p.lambda2 = 0.1;
        p.lambda3 = 1.0;
        assert!(!stability_check(&p, 1.0, 1.0).unwrap().det_nonneg);
        assert!(!reduced_stability(&p));
    }

    #[test]
    fn reduced_case_agrees() {
        let mut s = stream();
        for _ in 0..500 {
            let mut p = TwoHiggsParams::random(&mut s, false);
            p.mu12_sq = Complex64::new(0.0, 0.0);
            let (v1, v2) = (s.uniform_in(0.2, 2.0), s.uniform_in(0.2, 2.0));
            assert_eq!(stability_check(&p, v1, v2).unwrap().locally_stable(), reduced_stability(&p));
        }
    }

    #[test]
    fn classification_matches_directional_probe() {
        let mut s = stream();
        let mut checked = 0;
        while checked < 200 {
            let (v1, v2) = (s.uniform_in(0.2, 2.0), s.uniform_in(0.2, 2.0));
            let p = TwoHiggsParams::random(&mut s, false).with_tadpoles_solved(v1, v2).unwrap();
            let r = stability_check(&p, v1, v2).unwrap();
            if r.eigenvalues.0.abs() < 1e-3 {
                continue;
            }
            let rise = min_directional_rise(&p, v1, v2, 1e-3, 72);
            assert_eq!(r.locally_stable(), rise > 0.0);
            let (e0, e1) = r.eigenvalues;
            assert_eq!(r.locally_stable(), e0 >= 0.0 && e1 >= 0.0);
            checked += 1;
        }
    }

    #[test]
    fn rotation() {
        assert!((charged_higgs_rotation(1.0, 1.0).unwrap().beta - FRAC_PI_4).abs() < 1e-15);
        let r = charged_higgs_rotation(2.0, 0.0).unwrap();
        assert_eq!(r.beta, 0.0);
        assert_eq!(r.charged_coeffs, (0.0, -1.0));
        let r = charged_higgs_rotation(3.0, 4.0).unwrap().rotation;
        let out = [r[0][0] * 3.0 + r[0][1] * 4.0, r[1][0] * 3.0 + r[1][1] * 4.0];
        assert!((out[0] - 5.0).abs() < 1e-12 && out[1].abs() < 1e-12);
        assert_eq!(charged_higgs_rotation(0.0, 0.0), Err(Error::DegenerateVev));
    }

    #[test]
    fn cp_flag() {
        let mut p = TwoHiggsParams::random(&mut stream(), false);
        assert!(!cp_violation_flag(&p));
        p.lambda5.im = 0.3;
        assert!(cp_violation_flag(&p));
        p.lambda5.im = 0.0;
        p.mu12_sq.im = 1e-15;
        assert!(cp_violation_flag(&p));
    }

    #[test]
    fn theta_minimum_at_zero() {
        let mut s = stream();
        for _ in 0..50 {
            let mut p = TwoHiggsParams::random(&mut s, false);
            p.mu12_sq = Complex64::new(s.uniform_in(0.01, 2.0), 0.0);
            p.lambda5 = Complex64::new(-s.uniform_in(0.01, 2.0), 0.0);
            let th = theta_scan_minimizer(&p, s.uniform_in(0.1, 2.0), s.uniform_in(0.1, 2.0), 3600);
            assert_eq!(th, 0.0);
        }
    }
}
