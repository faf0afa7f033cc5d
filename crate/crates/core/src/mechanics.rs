//! Time averages for the anharmonic oscillator `H = p²/2m + λx^{2n}` and the
//! dynamics of an eccentric ball spinning on a smooth plane.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::numerics::{find_root, integrate_ode, Dopri5, OdeSpec, RandomStream};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorSpec {
    pub m: f64,
    pub lambda: f64,
    pub n: u32,
    pub x0: f64,
}

impl OscillatorSpec {
    pub fn new(m: f64, lambda: f64, n: u32, x0: f64) -> Result<Self> {
        if !(m > 0.0 && lambda > 0.0) || n == 0 {
            return domain(format!("need m > 0, lambda > 0, n >= 1: m = {m}, lambda = {lambda}, n = {n}"));
        }
        Ok(Self { m, lambda, n, x0 })
    }

    pub fn potential(&self, x: f64) -> f64 {
        self.lambda * x.powi(2 * self.n as i32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VirialAverages {
    pub kinetic: f64,
    pub potential: f64,
    pub periods: usize,
    pub duration: f64,
}

impl VirialAverages {
    pub fn ratio(&self) -> f64 {
        self.kinetic / self.potential
    }
}

/// Averages of `K` and `U` over exactly `n_periods` periods, each period
/// ending at a downward zero crossing of `p`.
pub fn virial_average(o: &OscillatorSpec, n_periods: usize, spec: &OdeSpec) -> Result<VirialAverages> {
    if o.x0 == 0.0 {
        return domain("oscillator at rest in equilibrium has no period");
    }
    if n_periods < 50 {
        return domain(format!("need at least 50 periods, got {n_periods}"));
    }
    let o = *o;
    let two_n = 2 * o.n as i32;
    let rhs = move |_t: f64, y: &[f64], dy: &mut [f64]| {
        dy[0] = y[1] / o.m;
        dy[1] = -(two_n as f64) * o.lambda * y[0].powi(two_n - 1);
        dy[2] = y[1] * y[1] / (2.0 * o.m);
        dy[3] = o.potential(y[0]);
    };
    // Starting at a turning point with x0 > 0 the momentum first goes
    // negative; mirror the crossing direction otherwise.
    let sign = o.x0.signum();
    let mut solver = Dopri5::new(rhs, 0.0, &[o.x0, 0.0, 0.0, 0.0], 1.0, *spec);
    let mut crossings = 0;
    let mut prev_p = 0.0;
    let mut started = false;
    loop {
        solver.step(f64::INFINITY)?;
        let p = solver.y()[1] * sign;
        if started && prev_p > 0.0 && p <= 0.0 {
            crossings += 1;
            if crossings == n_periods {
                let dense = solver.dense().expect("a step was taken").clone();
                let t_cross = if p == 0.0 {
                    solver.t()
                } else {
                    find_root(|t| dense.eval(t)[1] * sign, (dense.t0, dense.t1()), 1e-15)?
                };
                let y = dense.eval(t_cross);
                return Ok(VirialAverages {
                    kinetic: y[2] / t_cross,
                    potential: y[3] / t_cross,
                    periods: n_periods,
                    duration: t_cross,
                });
            }
        }
        if p < 0.0 {
            started = true;
        }
        prev_p = p;
    }
}

/// Ball of mass `m` whose centre of mass sits `l` below its geometric
/// centre, with moments `J` (transverse) and `J0` (axial), spun about the
/// vertical at `ω₀` with its axis tilted by `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TopSpec {
    pub m: f64,
    pub l: f64,
    pub j: f64,
    pub j0: f64,
    pub omega0: f64,
    pub epsilon: f64,
    pub g: f64,
}

pub const MIN_EPSILON: f64 = 1e-3;

impl TopSpec {
    pub fn new(m: f64, l: f64, j: f64, j0: f64, omega0: f64, epsilon: f64, g: f64) -> Result<Self> {
        if !(m > 0.0 && l > 0.0 && j > 0.0 && g > 0.0) {
            return domain("m, l, J and g must be positive");
        }
        if !(0.0..=2.0 * j).contains(&j0) {
            return domain(format!("need 0 <= J0 <= 2J, got J0 = {j0}, J = {j}"));
        }
        if !(MIN_EPSILON..=FRAC_PI_2).contains(&epsilon) {
            return domain(format!("tilt must lie in [{MIN_EPSILON}, π/2], got {epsilon}"));
        }
        Ok(Self {
            m,
            l,
            j,
            j0,
            omega0,
            epsilon,
            g,
        })
    }

    /// Unit mass and arm, `J = 1/β`, `J0 = αJ`, `g = γω₀²`.
    pub fn from_dimensionless(d: &DimensionlessTop, omega0: f64, epsilon: f64) -> Result<Self> {
        let j = 1.0 / d.beta;
        Self::new(1.0, 1.0, j, d.alpha * j, omega0, epsilon, d.gamma * omega0 * omega0)
    }

    /// Draw a spec whose initial tendency is clear-cut and whose nutation
    /// stays away from the vertical.
    pub fn random(stream: &mut RandomStream) -> Self {
        loop {
            let alpha = stream.uniform_in(0.0, 2.0);
            let beta = stream.uniform_in(0.2, 5.0);
            let beta_gamma = 10f64.powf(stream.uniform_in(-3.0, 0.5));
            let epsilon = stream.uniform_in(0.2, 1.4);
            let omega0 = stream.uniform_in(0.5, 2.0);
            let d = DimensionlessTop {
                alpha,
                beta,
                gamma: beta_gamma / beta,
            };
            if ((alpha - 1.0) * epsilon.cos() + beta_gamma).abs() < 0.05 {
                continue;
            }
            let Ok(band) = motion_band(&d, epsilon) else {
                continue;
            };
            if band.cos_theta_range.1 > 0.1f64.cos() {
                continue;
            }
            return Self::from_dimensionless(&d, omega0, epsilon).expect("sampled within bounds");
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DimensionlessTop {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl DimensionlessTop {
    pub fn beta_gamma(&self) -> f64 {
        self.beta * self.gamma
    }
}

/// `α = J0/J`, `β = ml²/J`, `γ = g/(lω₀²)`; `γ = +∞` when `ω₀ = 0`.
pub fn dimensionless(t: &TopSpec) -> DimensionlessTop {
    let gamma = if t.omega0 == 0.0 {
        f64::INFINITY
    } else {
        t.g / (t.l * t.omega0 * t.omega0)
    };
    DimensionlessTop {
        alpha: t.j0 / t.j,
        beta: t.m * t.l * t.l / t.j,
        gamma,
    }
}

/// Coefficients of `Θ = a₀ + 2a₁ cos θ + a₂ cos² θ`.
pub fn theta_coeffs(d: &DimensionlessTop, eps: f64) -> (f64, f64, f64) {
    let a = d.alpha;
    let bg = d.beta_gamma();
    let a0 = -2.0 * bg - 0.25 * ((a - 1.0).powi(2) * (3.0 * eps).cos() + (a + 1.0) * (3.0 * a - 1.0) * eps.cos());
    let a1 = 0.25 * ((a * a - 1.0) * (2.0 * eps).cos() + a * a + 1.0);
    (a0, a1, 2.0 * bg)
}

pub fn theta_function(d: &DimensionlessTop, eps: f64, cos_theta: f64) -> f64 {
    let (a0, a1, a2) = theta_coeffs(d, eps);
    a0 + 2.0 * a1 * cos_theta + a2 * cos_theta * cos_theta
}

/// `Θ(ε) = −2 sin²ε ((α − 1) cos ε + βγ)`.
pub fn theta_at_start(d: &DimensionlessTop, eps: f64) -> f64 {
    -2.0 * eps.sin().powi(2) * ((d.alpha - 1.0) * eps.cos() + d.beta_gamma())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InitialMotion {
    Lifts,
    Descends,
    ConstantHeight,
}

pub fn initial_motion(d: &DimensionlessTop, eps: f64) -> InitialMotion {
    let tilt = (d.alpha - 1.0) * eps.cos();
    let s = tilt + d.beta_gamma();
    if s.abs() <= 1e-14 * (tilt.abs() + d.beta_gamma()) {
        InitialMotion::ConstantHeight
    } else if s < 0.0 {
        InitialMotion::Lifts
    } else {
        InitialMotion::Descends
    }
}

pub fn lifts_up(d: &DimensionlessTop, eps: f64) -> bool {
    initial_motion(d, eps) == InitialMotion::Lifts
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MotionBand {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub z_plus: f64,
    pub z_minus: f64,
    pub lifts_up: bool,
    pub cos_theta_range: (f64, f64),
}

/// Roots of `Θ` in `cos θ` and the interval `cos θ` sweeps.
pub fn motion_band(d: &DimensionlessTop, eps: f64) -> Result<MotionBand> {
    let (a0, a1, a2) = theta_coeffs(d, eps);
    let (z_plus, z_minus) = if a2 == 0.0 {
        (-a0 / (2.0 * a1), f64::NEG_INFINITY)
    } else {
        let centre = -a1 / a2;
        let disc = centre * centre - a0 / a2;
        if disc < -1e-14 * centre * centre {
            return Err(Error::ComplexRoots { discriminant: disc });
        }
        let root = disc.max(0.0).sqrt();
        (centre + root, centre - root)
    };
    let lifts = lifts_up(d, eps);
    let c = eps.cos();
    let range = if lifts { (z_plus.max(-1.0), c) } else { (c, z_plus.min(1.0)) };
    Ok(MotionBand {
        a0,
        a1,
        a2,
        z_plus,
        z_minus,
        lifts_up: lifts,
        cos_theta_range: range,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquatorReach {
    pub possible: bool,
    /// Values of `α` making `a₀ = 0`, larger first.
    pub alpha_roots: Option<(f64, f64)>,
}

/// Whether the centre of mass can rise to the height of the geometric
/// centre for some `α ∈ [0, 1]`.
pub fn equator_reachable(d: &DimensionlessTop, eps: f64) -> Result<EquatorReach> {
    if !(eps > 0.0 && eps < FRAC_PI_2) {
        return domain(format!("tilt must lie in (0, π/2), got {eps}"));
    }
    let (s2, c) = (eps.sin().powi(2), eps.cos());
    let bg = d.beta_gamma();
    let disc = s2 - 2.0 * bg * c;
    let alpha_roots = (disc >= 0.0).then(|| {
        let r = disc.sqrt();
        ((-s2 + r) / (c * c), (-s2 - r) / (c * c))
    });
    Ok(EquatorReach {
        possible: s2 * c * c - 2.0 * bg * c >= 0.0,
        alpha_roots,
    })
}

impl TopSpec {
    /// `(φ̇, ψ̇)` at polar angle `θ` from the two cyclic momenta.
    pub fn spin_rates(&self, theta: f64) -> (f64, f64) {
        let (s, c) = theta.sin_cos();
        let (se, ce) = self.epsilon.sin_cos();
        let k = self.j * se * se + self.j0 * ce * ce;
        let denom = self.j * s * s;
        let phi_dot = self.omega0 / denom * (k - self.j0 * ce * c);
        let psi_dot = self.omega0 / denom * (ce * (self.j * s * s + self.j0 * c * c) - c * k);
        (phi_dot, psi_dot)
    }

    /// `θ̈` from the Lagrange equation for `θ`.
    pub fn theta_accel(&self, theta: f64, theta_dot: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        let (phi_dot, psi_dot) = self.spin_rates(theta);
        let ml2 = self.m * self.l * self.l;
        -(ml2 * s * c * theta_dot * theta_dot
            + (self.j0 - self.j) * s * c * phi_dot * phi_dot
            + self.j0 * s * phi_dot * psi_dot
            + self.m * self.g * self.l * s)
            / (ml2 * s * s + self.j)
    }

    /// Twice the total energy at `(θ, θ̇)` with the cyclic velocities
    /// eliminated.
    pub fn twice_energy(&self, theta: f64, theta_dot: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        let (pd, sd) = self.spin_rates(theta);
        (self.m * self.l * self.l * s * s + self.j) * theta_dot * theta_dot
            + (self.j * s * s + self.j0 * c * c) * pd * pd
            + self.j0 * sd * sd
            + 2.0 * self.j0 * c * pd * sd
            - 2.0 * self.m * self.g * self.l * c
    }

    pub fn twice_initial_energy(&self) -> f64 {
        let (se, ce) = self.epsilon.sin_cos();
        (self.j * se * se + self.j0 * ce * ce) * self.omega0 * self.omega0 - 2.0 * self.m * self.g * self.l * ce
    }

    pub fn p_phi(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        let (pd, sd) = self.spin_rates(theta);
        self.j * s * s * pd + self.j0 * c * (c * pd + sd)
    }

    pub fn p_psi(&self, theta: f64) -> f64 {
        let (pd, sd) = self.spin_rates(theta);
        self.j0 * (theta.cos() * pd + sd)
    }

    /// Left minus right side of the first-order equation for `θ`, divided
    /// by `ω₀²`.
    pub fn reduced_residual(&self, theta: f64, theta_dot: f64) -> f64 {
        let d = dimensionless(self);
        let s2 = theta.sin().powi(2);
        let lhs = s2 * (1.0 + d.beta * s2) * theta_dot * theta_dot;
        let w2 = self.omega0 * self.omega0;
        let rhs = w2 * (self.epsilon.cos() - theta.cos()) * theta_function(&d, self.epsilon, theta.cos());
        (lhs - rhs) / w2
    }

    /// `J ω₀² + mgl`, the scale for energy drift.
    pub fn energy_scale(&self) -> f64 {
        self.j * self.omega0 * self.omega0 + self.m * self.g * self.l
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TopSample {
    pub t: f64,
    pub theta: f64,
    pub theta_dot: f64,
    pub phi: f64,
    pub psi: f64,
    pub x_m: f64,
    pub y_m: f64,
    pub energy: f64,
    pub p_phi: f64,
    pub p_psi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopTrajectory {
    pub spec: TopSpec,
    pub samples: Vec<TopSample>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TopMonitors {
    /// `max |E − E₀| / (Jω₀² + mgl)`.
    pub energy_drift: f64,
    /// `max |p − p₀| / (Jω₀)` for both cyclic momenta.
    pub p_phi_drift: f64,
    pub p_psi_drift: f64,
    /// Largest reduced-equation residual over `ω₀²(1 + βγ)`.
    pub reduced_residual: f64,
    pub cos_theta_min: f64,
    pub cos_theta_max: f64,
    pub theta_min: f64,
    pub theta_max: f64,
}

fn top_rhs(t: TopSpec) -> impl FnMut(f64, &[f64], &mut [f64]) {
    move |_time, y, dy| {
        let (pd, sd) = t.spin_rates(y[0]);
        dy[0] = y[1];
        dy[1] = t.theta_accel(y[0], y[1]);
        dy[2] = pd;
        dy[3] = sd;
    }
}

const POLE_GUARD: f64 = 1e-6;

/// Integrate from `θ = ε`, `θ̇ = 0`, `φ = ψ = 0`, `φ̇ = ω₀`; with
/// `n_samples = 0` every accepted step is recorded.
pub fn simulate_top(t: &TopSpec, t_end: f64, n_samples: usize, spec: &OdeSpec) -> Result<TopTrajectory> {
    if !(t_end > 0.0) {
        return domain("end time must be positive");
    }
    let times: Vec<f64> = (0..=n_samples)
        .filter(|_| n_samples > 0)
        .map(|i| t_end * i as f64 / n_samples as f64)
        .collect();
    let traj = integrate_ode(top_rhs(*t), &[t.epsilon, 0.0, 0.0, 0.0], (0.0, t_end), &times, spec)?;
    let (se, _) = t.epsilon.sin_cos();
    let mut samples = Vec::with_capacity(traj.len());
    for (&time, y) in traj.t.iter().zip(&traj.y) {
        if y[0].sin() < POLE_GUARD {
            return Err(Error::StepUnderflow { t: time, step: 0.0 });
        }
        samples.push(TopSample {
            t: time,
            theta: y[0],
            theta_dot: y[1],
            phi: y[2],
            psi: y[3],
            x_m: -t.omega0 * time * t.l * se,
            y_m: t.l * se,
            energy: 0.5 * t.twice_energy(y[0], y[1]),
            p_phi: t.p_phi(y[0]),
            p_psi: t.p_psi(y[0]),
        });
    }
    Ok(TopTrajectory { spec: *t, samples })
}

impl TopTrajectory {
    pub fn monitors(&self) -> TopMonitors {
        let t = &self.spec;
        let d = dimensionless(t);
        let e0 = 0.5 * t.twice_initial_energy();
        let (se, ce) = t.epsilon.sin_cos();
        let p_phi0 = t.omega0 * (t.j * se * se + t.j0 * ce * ce);
        let p_psi0 = t.j0 * t.omega0 * ce;
        let p_scale = t.j * t.omega0.abs();
        let mut m = TopMonitors {
            energy_drift: 0.0,
            p_phi_drift: 0.0,
            p_psi_drift: 0.0,
            reduced_residual: 0.0,
            cos_theta_min: f64::INFINITY,
            cos_theta_max: f64::NEG_INFINITY,
            theta_min: f64::INFINITY,
            theta_max: f64::NEG_INFINITY,
        };
        for s in &self.samples {
            m.energy_drift = m.energy_drift.max((s.energy - e0).abs() / t.energy_scale());
            m.p_phi_drift = m.p_phi_drift.max((s.p_phi - p_phi0).abs() / p_scale);
            m.p_psi_drift = m.p_psi_drift.max((s.p_psi - p_psi0).abs() / p_scale);
            m.reduced_residual = m
                .reduced_residual
                .max(t.reduced_residual(s.theta, s.theta_dot).abs() / (1.0 + d.beta_gamma()));
            let c = s.theta.cos();
            m.cos_theta_min = m.cos_theta_min.min(c);
            m.cos_theta_max = m.cos_theta_max.max(c);
            m.theta_min = m.theta_min.min(s.theta);
            m.theta_max = m.theta_max.max(s.theta);
        }
        m
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,theta,phi,psi,x_m,y_m,energy,p_phi,p_psi\n");
        for s in &self.samples {
            out.push_str(&format!(
                "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}\n",
                s.t, s.theta, s.phi, s.psi, s.x_m, s.y_m, s.energy, s.p_phi, s.p_psi
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn ode() -> OdeSpec {
        OdeSpec::new(1e-13, 1e-12, f64::INFINITY, 1e-14).unwrap()
    }

    #[test]
    fn virial_ratios() {
        for (n, tol) in [(1u32, 1e-6), (2, 1e-3), (3, 1e-3), (5, 1e-3)] {
            let o = OscillatorSpec::new(1.0, 1.0, n, 1.0).unwrap();
            let avg = virial_average(&o, 200, &ode()).unwrap();
            assert!((avg.ratio() / n as f64 - 1.0).abs() <= tol, "n={n}: {}", avg.ratio());
        }
        let negative = OscillatorSpec::new(2.0, 0.5, 2, -1.5).unwrap();
        assert!((virial_average(&negative, 60, &ode()).unwrap().ratio() - 2.0).abs() <= 1e-3);
        let o = OscillatorSpec::new(1.0, 1.0, 1, 0.0).unwrap();
        assert!(virial_average(&o, 60, &ode()).is_err());
    }

    #[test]
    fn harmonic_period() {
        let o = OscillatorSpec::new(1.0, 2.0, 1, 0.3).unwrap();
        let avg = virial_average(&o, 50, &ode()).unwrap();
        assert!((avg.duration - 50.0 * PI).abs() < 1e-8);
    }

    #[test]
    fn dimensionless_values() {
        let t = TopSpec::new(2.0, 0.5, 1.0, 1.0, 3.0, 0.4, 9.8).unwrap();
        let d = dimensionless(&t);
        assert_eq!(d.alpha, 1.0);
        assert!((d.beta - 0.5).abs() < 1e-15);
        assert!((d.gamma - (9.8f64 / 0.5).sqrt().powi(2) / 9.0).abs() < 1e-14);
        let rotator = TopSpec { j0: 0.0, omega0: 0.0, ..t };
        let d = dimensionless(&rotator);
        assert_eq!(d.alpha, 0.0);
        assert_eq!(d.gamma, f64::INFINITY);
        assert!(TopSpec::new(1.0, 1.0, 1.0, 2.5, 1.0, 0.4, 1.0).is_err());
        assert!(TopSpec::new(1.0, 1.0, 1.0, 0.5, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn coefficient_bounds_and_identity() {
        let mut s = RandomStream::new(3, 10);
        for _ in 0..500 {
            let d = DimensionlessTop {
                alpha: s.uniform_in(0.0, 2.0),
                beta: s.uniform_in(0.0, 5.0),
                gamma: s.uniform_in(0.0, 5.0),
            };
            let eps = s.uniform_in(1e-3, PI);
            let (_, a1, a2) = theta_coeffs(&d, eps);
            assert!(a2 >= 0.0 && (0.0..=2.0).contains(&a1));
            let direct = theta_function(&d, eps, eps.cos());
            assert!((direct - theta_at_start(&d, eps)).abs() <= 1e-12 * (1.0 + d.beta_gamma()));
        }
    }

    #[test]
    fn lifting_predicate() {
        for eps in [0.1, 0.7, 1.5] {
            for bg in [0.0, 0.3, 5.0] {
                let d = DimensionlessTop {
                    alpha: 1.5,
                    beta: 1.0,
                    gamma: bg,
                };
                assert!(!lifts_up(&d, eps));
            }
        }
        let d = DimensionlessTop {
            alpha: 0.0,
            beta: 1.0,
            gamma: 1e-9,
        };
        assert!(lifts_up(&d, 0.3));
        let eps: f64 = 0.6;
        let d = DimensionlessTop {
            alpha: 0.5,
            beta: 1.0,
            gamma: 0.5 * eps.cos(),
        };
        assert_eq!(initial_motion(&d, eps), InitialMotion::ConstantHeight);
        assert!(!lifts_up(&d, eps));
    }

    #[test]
    fn band_roots() {
        let mut s = RandomStream::new(3, 11);
        for _ in 0..10_000 {
            let d = DimensionlessTop {
                alpha: s.uniform_in(0.0, 2.0),
                beta: 1.0,
                gamma: s.uniform_in(1e-9, 10.0),
            };
            let eps = s.uniform_in(1e-3, FRAC_PI_2);
            let b = motion_band(&d, eps).unwrap();
            assert!(b.z_minus <= b.z_plus);
            assert!(b.cos_theta_range.0 <= b.cos_theta_range.1);
            if b.lifts_up {
                assert!(b.z_plus >= -eps.cos() - 1e-12);
            }
        }
        let d = DimensionlessTop {
            alpha: 0.7,
            beta: 1.0,
            gamma: 1e8,
        };
        assert!((motion_band(&d, 0.5).unwrap().z_plus - 1.0).abs() < 1e-6);
    }

    #[test]
    fn equator() {
        let eps: f64 = 0.6;
        let (s, c) = eps.sin_cos();
        let free = DimensionlessTop {
            alpha: 0.0,
            beta: 1.0,
            gamma: 0.0,
        };
        let r = equator_reachable(&free, eps).unwrap();
        assert!(r.possible);
        let (hi, lo) = r.alpha_roots.unwrap();
        assert!((hi - s / (1.0 + s)).abs() < 1e-14 && (lo + s * (1.0 + s) / (c * c)).abs() < 1e-14);
        let edge = DimensionlessTop {
            gamma: 0.5 * s * s * c,
            ..free
        };
        let (hi, lo) = equator_reachable(&edge, eps).unwrap().alpha_roots.unwrap();
        assert!(hi.abs() < 1e-14 && (lo + 2.0 * s * s / (c * c)).abs() < 1e-14);
        let far = DimensionlessTop {
            gamma: 0.51 * s * s * c,
            ..free
        };
        assert!(!equator_reachable(&far, eps).unwrap().possible);
        for bg in [0.0, 0.05, 0.1] {
            let d = DimensionlessTop { gamma: bg, ..free };
            let r = equator_reachable(&d, eps).unwrap();
            if let Some((hi, lo)) = r.alpha_roots {
                for alpha in [hi, lo] {
                    let (a0, _, _) = theta_coeffs(&DimensionlessTop { alpha, ..d }, eps);
                    assert!(a0.abs() <= 1e-10);
                }
            }
        }
    }

    #[test]
    fn spin_rates_start_values() {
        let t = TopSpec::new(1.0, 0.8, 1.2, 0.9, 2.0, 0.5, 9.8).unwrap();
        let (pd, sd) = t.spin_rates(0.5);
        assert!((pd - 2.0).abs() < 1e-14 && sd.abs() < 1e-14);
        assert!((t.twice_energy(0.5, 0.0) - t.twice_initial_energy()).abs() < 1e-12);
    }

    #[test]
    fn trajectories_conserve_and_stay_in_band() {
        let mut s = RandomStream::new(8, 12);
        for _ in 0..10 {
            let t = TopSpec::random(&mut s);
            let run = simulate_top(&t, 50.0 / t.omega0, 2000, &ode()).unwrap();
            let m = run.monitors();
            assert!(m.energy_drift <= 1e-8 && m.p_phi_drift <= 1e-8 && m.p_psi_drift <= 1e-8, "{m:?}");
            assert!(m.reduced_residual <= 1e-8, "{m:?}");
            let band = motion_band(&dimensionless(&t), t.epsilon).unwrap();
            assert!(m.cos_theta_min >= band.cos_theta_range.0 - 1e-6 && m.cos_theta_max <= band.cos_theta_range.1 + 1e-6);
        }
    }

    #[test]
    fn constant_height_regime() {
        let eps: f64 = 0.7;
        let d = DimensionlessTop {
            alpha: 0.4,
            beta: 2.0,
            gamma: 0.6 * eps.cos() / 2.0,
        };
        let t = TopSpec::from_dimensionless(&d, 1.5, eps).unwrap();
        let run = simulate_top(&t, 20.0 * 2.0 * PI / t.omega0, 500, &ode()).unwrap();
        assert!(run.samples.iter().all(|s| (s.theta - eps).abs() <= 1e-6));
        assert_eq!(run.samples[10].y_m, t.l * eps.sin());
    }
}
