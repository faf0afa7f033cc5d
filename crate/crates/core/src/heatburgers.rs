//! Heat conduction in a rod with Dirichlet ends, by Fourier series and by a
//! Crank–Nicolson oracle, plus the heat kernel and the Cole–Hopf map to
//! Burgers' equation.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::numerics::{integrate_pieces, QuadratureSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RodSpec {
    pub l: f64,
    pub a_sq: f64,
    pub c: f64,
}

impl RodSpec {
    pub fn new(l: f64, a_sq: f64, c: f64) -> Result<Self> {
        if !(l > 0.0 && a_sq > 0.0 && c > 0.0) {
            return domain(format!("rod parameters must be positive: l = {l}, a² = {a_sq}, c = {c}"));
        }
        Ok(Self { l, a_sq, c })
    }

    /// Decay time `(l/(πa))²` of the slowest mode.
    pub fn time_scale(&self) -> f64 {
        self.l * self.l / (PI * PI * self.a_sq)
    }

    fn rate(&self, n: f64) -> f64 {
        (PI * n / self.l).powi(2) * self.a_sq
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesTruncation {
    pub n_terms: usize,
    /// Raise `n_terms` to `l²/(a²t)` (capped at 10⁵) for small `t`.
    pub adaptive: bool,
}

impl SeriesTruncation {
    pub const MAX_TERMS: usize = 100_000;

    pub fn fixed(n_terms: usize) -> Result<Self> {
        if n_terms == 0 {
            return domain("series needs at least one term");
        }
        Ok(Self {
            n_terms,
            adaptive: false,
        })
    }

    fn terms_at(&self, r: &RodSpec, t: f64) -> usize {
        if !self.adaptive {
            return self.n_terms;
        }
        let scaled = if t > 0.0 {
            (r.l * r.l / (r.a_sq * t)).ceil().min(Self::MAX_TERMS as f64) as usize
        } else {
            Self::MAX_TERMS
        };
        self.n_terms.max(scaled)
    }
}

impl Default for SeriesTruncation {
    fn default() -> Self {
        Self {
            n_terms: 512,
            adaptive: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Field1D {
    pub x: Vec<f64>,
    pub values: Vec<f64>,
    pub t: f64,
}

impl Field1D {
    pub fn new(x: Vec<f64>, values: Vec<f64>, t: f64) -> Result<Self> {
        if x.len() != values.len() || x.len() < 2 {
            return domain("field needs matching grid and values with at least two nodes");
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return domain("field grid must be strictly increasing");
        }
        Ok(Self { x, values, t })
    }

    /// `nx + 1` equispaced nodes on `[0, l]` with `f` at interior nodes and
    /// zero at both ends.
    pub fn dirichlet(l: f64, nx: usize, f: impl Fn(f64) -> f64) -> Self {
        let x: Vec<f64> = (0..=nx).map(|j| l * j as f64 / nx as f64).collect();
        let values = x
            .iter()
            .enumerate()
            .map(|(j, &xj)| if j == 0 || j == nx { 0.0 } else { f(xj) })
            .collect();
        Self { x, values, t: 0.0 }
    }

    /// Piecewise-linear interpolation.
    pub fn at(&self, x: f64) -> f64 {
        let i = self.x.partition_point(|&g| g <= x).clamp(1, self.x.len() - 1);
        let (x0, x1) = (self.x[i - 1], self.x[i]);
        let w = (x - x0) / (x1 - x0);
        self.values[i - 1] * (1.0 - w) + self.values[i] * w
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,value\n");
        for (x, v) in self.x.iter().zip(&self.values) {
            out.push_str(&format!("{x:.17e},{v:.17e}\n"));
        }
        out
    }
}

fn check_position(r: &RodSpec, x: f64) -> Result<()> {
    if !(0.0..=r.l).contains(&x) {
        return domain(format!("x = {x} outside [0, {}]", r.l));
    }
    Ok(())
}

/// Constant initial temperature `T0`, ends held at zero.
pub fn series_case_a(r: &RodSpec, t0: f64, x: f64, t: f64, tr: &SeriesTruncation) -> Result<f64> {
    check_position(r, x)?;
    if !(t >= 0.0) {
        return domain("time must be nonnegative");
    }
    if x == 0.0 || x == r.l {
        return Ok(0.0);
    }
    let mut sum = 0.0;
    for k in (0..tr.terms_at(r, t)).rev() {
        let n = (2 * k + 1) as f64;
        sum += (-r.rate(n) * t).exp() * (PI * n * x / r.l).sin() / n;
    }
    Ok(4.0 * t0 / PI * sum)
}

/// Tent-shaped steady state driven by a point source `Q` at `l/2`.
pub fn stationary_omega(r: &RodSpec, q: f64, x: f64) -> Result<f64> {
    check_position(r, x)?;
    let k = q / (r.a_sq * r.c);
    Ok(-0.5 * k * (x - 0.5 * r.l).abs() + 0.25 * k * r.l)
}

/// Odd-harmonic sine expansion of the tent.
pub fn stationary_omega_fourier(r: &RodSpec, q: f64, x: f64, tr: &SeriesTruncation) -> Result<f64> {
    check_position(r, x)?;
    let mut sum = 0.0;
    for k in (0..tr.n_terms).rev() {
        let n = (2 * k + 1) as f64;
        sum += alternating(k) / (n * n) * (PI * n * x / r.l).sin();
    }
    Ok(2.0 * q * r.l / (PI * PI * r.a_sq * r.c) * sum)
}

fn alternating(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Rod initially at zero heated by a point source `Q` at `l/2`.
pub fn series_case_b(r: &RodSpec, q: f64, x: f64, t: f64, tr: &SeriesTruncation) -> Result<f64> {
    check_position(r, x)?;
    if !(t >= 0.0) {
        return domain("time must be nonnegative");
    }
    let mut sum = 0.0;
    for k in (0..tr.n_terms).rev() {
        let n = (2 * k + 1) as f64;
        sum += alternating(k) / (n * n) * (PI * n * x / r.l).sin() * -(-r.rate(n) * t).exp_m1();
    }
    Ok(2.0 * q * r.l / (PI * PI * r.a_sq * r.c) * sum)
}

/// Coefficient `C_n(t)` of `sin(πnx/l)` from the modal ODE.
pub fn modal_coefficient(r: &RodSpec, q: f64, n: usize, t: f64) -> f64 {
    let nf = n as f64;
    let lambda = r.rate(nf);
    2.0 * q / (r.l * r.c) * (PI * nf / 2.0).sin() / lambda * -(-lambda * t).exp_m1()
}

/// Case (b) summed over all harmonics `n = 1..=2·n_terms`.
pub fn series_case_b_modal(r: &RodSpec, q: f64, x: f64, t: f64, tr: &SeriesTruncation) -> Result<f64> {
    check_position(r, x)?;
    Ok((1..=2 * tr.n_terms)
        .rev()
        .map(|n| modal_coefficient(r, q, n, t) * (PI * n as f64 * x / r.l).sin())
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SourceLumping {
    /// Whole source on the node nearest `l/2`.
    #[default]
    NearestNode,
    /// Linear split between the two nodes around `l/2`.
    Linear,
}

/// Crank–Nicolson on `nx + 1` nodes with Rannacher start-up (the first two
/// steps as four backward-Euler half steps).
pub fn fd_heat_solve(r: &RodSpec, initial: &Field1D, source_strength: f64, t_end: f64, nx: usize, nt: usize) -> Result<Field1D> {
    fd_heat_solve_with(r, initial, source_strength, t_end, nx, nt, SourceLumping::NearestNode)
}

pub fn fd_heat_solve_with(
    r: &RodSpec,
    initial: &Field1D,
    source_strength: f64,
    t_end: f64,
    nx: usize,
    nt: usize,
    lumping: SourceLumping,
) -> Result<Field1D> {
    if nx < 32 || nt == 0 {
        return domain(format!("need nx >= 32 and nt >= 1, got nx = {nx}, nt = {nt}"));
    }
    if initial.values.len() != nx + 1 {
        return domain(format!("initial field has {} nodes, expected {}", initial.values.len(), nx + 1));
    }
    if !(t_end >= 0.0) {
        return domain("end time must be nonnegative");
    }
    let h = r.l / nx as f64;
    let m = nx - 1;
    let mut source = vec![0.0; m];
    if source_strength != 0.0 {
        let density = source_strength / (r.c * h);
        let pos = 0.5 * r.l / h;
        match lumping {
            SourceLumping::NearestNode => source[pos.round() as usize - 1] += density,
            SourceLumping::Linear => {
                let j = pos.floor() as usize;
                let w = pos - j as f64;
                if j >= 1 {
                    source[j - 1] += density * (1.0 - w);
                }
                if w > 0.0 && j < m {
                    source[j] += density * w;
                }
            }
        }
    }
    let mut u: Vec<f64> = initial.values[1..nx].to_vec();
    let dt = t_end / nt as f64;
    let coupling = r.a_sq / (h * h);
    let step = |u: &mut Vec<f64>, dt: f64, theta: f64| {
        let explicit = (1.0 - theta) * dt * coupling;
        let rhs: Vec<f64> = (0..m)
            .map(|j| {
                let left = if j > 0 { u[j - 1] } else { 0.0 };
                let right = if j + 1 < m { u[j + 1] } else { 0.0 };
                u[j] + explicit * (left - 2.0 * u[j] + right) + dt * source[j]
            })
            .collect();
        let implicit = theta * dt * coupling;
        *u = solve_tridiagonal(-implicit, 1.0 + 2.0 * implicit, -implicit, rhs);
    };
    let startup = nt.min(2);
    for _ in 0..2 * startup {
        step(&mut u, 0.5 * dt, 1.0);
    }
    for _ in startup..nt {
        step(&mut u, dt, 0.5);
    }
    let mut values = Vec::with_capacity(nx + 1);
    values.push(0.0);
    values.extend(u);
    values.push(0.0);
    Field1D::new(initial.x.clone(), values, initial.t + t_end)
}

/// Thomas algorithm for a constant-coefficient tridiagonal system.
fn solve_tridiagonal(lower: f64, diag: f64, upper: f64, mut d: Vec<f64>) -> Vec<f64> {
    let n = d.len();
    let mut c = vec![0.0; n];
    let mut beta = diag;
    c[0] = upper / beta;
    d[0] /= beta;
    for i in 1..n {
        beta = diag - lower * c[i - 1];
        c[i] = upper / beta;
        d[i] = (d[i] - lower * d[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    d
}

fn kernel_window(nu: f64, x: f64, t: f64) -> Result<Vec<f64>> {
    if !(nu > 0.0 && t > 0.0) {
        return domain(format!("heat kernel needs nu > 0 and t > 0, got nu = {nu}, t = {t}"));
    }
    let s = (2.0 * nu * t).sqrt();
    Ok([-12.0, -6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0, 12.0].iter().map(|m| x + m * s).collect())
}

/// `(4πνt)^{−1/2} ∫ f₀(y) e^{−(x−y)²/4νt} dy` over `x ± 12√(2νt)`.
pub fn heat_kernel_convolve(nu: f64, f0: impl Fn(f64) -> f64, x: f64, t: f64) -> Result<f64> {
    let pts = kernel_window(nu, x, t)?;
    let norm = 1.0 / (4.0 * PI * nu * t).sqrt();
    integrate_pieces(|y| norm * f0(y) * (-(x - y).powi(2) / (4.0 * nu * t)).exp(), &pts, &QuadratureSpec::tight())
}

/// `∂ₓ` of [`heat_kernel_convolve`], differentiating the kernel.
pub fn heat_kernel_convolve_dx(nu: f64, f0: impl Fn(f64) -> f64, x: f64, t: f64) -> Result<f64> {
    let pts = kernel_window(nu, x, t)?;
    let norm = 1.0 / (4.0 * PI * nu * t).sqrt();
    integrate_pieces(
        |y| -norm * f0(y) * (x - y) / (2.0 * nu * t) * (-(x - y).powi(2) / (4.0 * nu * t)).exp(),
        &pts,
        &QuadratureSpec::tight(),
    )
}

const ZERO_THRESHOLD: f64 = 1e-300;

/// `v = −2ν f_x/f`; without `f_x` the derivative is a fourth-order central
/// difference.
pub fn cole_hopf(nu: f64, f: impl Fn(f64) -> f64, f_x: Option<&dyn Fn(f64) -> f64>, x: f64) -> Result<f64> {
    if !(nu > 0.0) {
        return domain("viscosity must be positive");
    }
    let value = f(x);
    if !(value.abs() > ZERO_THRESHOLD) {
        return Err(Error::ZeroDenominator { value });
    }
    let slope = match f_x {
        Some(d) => d(x),
        None => {
            let h = 1e-3 * x.abs().max(1.0);
            (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
        }
    };
    Ok(-2.0 * nu * slope / value)
}

/// Closed-form solutions of `f_t = ν f_xx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HeatSolution {
    /// `e^{−cx/2ν + c²t/4ν}`, mapped to `v ≡ c`.
    Exponential { c: f64 },
    /// `1 + A e^{−νk²t} cos(kx)` with `|A| < 1`.
    Cosine { k: f64, amplitude: f64 },
    /// `1 + M (4πνt)^{−1/2} e^{−(x−x₀)²/4νt}`.
    Source { x0: f64, mass: f64 },
}

impl HeatSolution {
    pub fn value(&self, nu: f64, x: f64, t: f64) -> f64 {
        match *self {
            HeatSolution::Exponential { c } => (-c * x / (2.0 * nu) + c * c * t / (4.0 * nu)).exp(),
            HeatSolution::Cosine { k, amplitude } => 1.0 + amplitude * (-nu * k * k * t).exp() * (k * x).cos(),
            HeatSolution::Source { x0, mass } => {
                1.0 + mass / (4.0 * PI * nu * t).sqrt() * (-(x - x0).powi(2) / (4.0 * nu * t)).exp()
            }
        }
    }

    pub fn dx(&self, nu: f64, x: f64, t: f64) -> f64 {
        match *self {
            HeatSolution::Exponential { c } => -c / (2.0 * nu) * self.value(nu, x, t),
            HeatSolution::Cosine { k, amplitude } => -amplitude * k * (-nu * k * k * t).exp() * (k * x).sin(),
            HeatSolution::Source { x0, mass } => {
                -(x - x0) / (2.0 * nu * t) * mass / (4.0 * PI * nu * t).sqrt() * (-(x - x0).powi(2) / (4.0 * nu * t)).exp()
            }
        }
    }

    /// Burgers velocity at `(x, t)` through the Cole–Hopf map.
    pub fn burgers_velocity(&self, nu: f64, x: f64, t: f64) -> Result<f64> {
        cole_hopf(nu, |y| self.value(nu, y, t), Some(&|y| self.dx(nu, y, t)), x)
    }
}

/// `v` sampled on a uniform `(t, x)` lattice; `v[i][j]` is at `(t[i], x[j])`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpaceTimeGrid {
    pub x: Vec<f64>,
    pub t: Vec<f64>,
    pub v: Vec<Vec<f64>>,
}

impl SpaceTimeGrid {
    pub fn sample(x: Vec<f64>, t: Vec<f64>, mut v: impl FnMut(f64, f64) -> Result<f64>) -> Result<Self> {
        if x.len() < 3 || t.len() < 3 {
            return domain("space-time grid needs at least three nodes per axis");
        }
        let rows = t.iter().map(|&ti| x.iter().map(|&xj| v(xj, ti)).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
        Ok(Self { x, t, v: rows })
    }

    pub fn uniform(x_range: (f64, f64), nx: usize, t_range: (f64, f64), nt: usize, v: impl FnMut(f64, f64) -> Result<f64>) -> Result<Self> {
        let axis = |(lo, hi): (f64, f64), n: usize| (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect::<Vec<_>>();
        Self::sample(axis(x_range, nx), axis(t_range, nt), v)
    }
}

/// Max-norm over interior nodes of `v_t + v v_x − ν v_xx` by central
/// differences.
pub fn burgers_residual(nu: f64, grid: &SpaceTimeGrid) -> f64 {
    let dx = grid.x[1] - grid.x[0];
    let dt = grid.t[1] - grid.t[0];
    let mut worst: f64 = 0.0;
    for i in 1..grid.t.len() - 1 {
        let row = &grid.v[i];
        for j in 1..grid.x.len() - 1 {
            let vt = (grid.v[i + 1][j] - grid.v[i - 1][j]) / (2.0 * dt);
            let vx = (row[j + 1] - row[j - 1]) / (2.0 * dx);
            let vxx = (row[j + 1] - 2.0 * row[j] + row[j - 1]) / (dx * dx);
            worst = worst.max((vt + row[j] * vx - nu * vxx).abs());
        }
    }
    worst
}

/// Two Lorentzian humps centred at `±5`.
pub fn two_bump_velocity(x: f64) -> f64 {
    1.0 / (1.0 + (x - 5.0).powi(2)) + 1.0 / (1.0 + (x + 5.0).powi(2))
}

/// `exp(−(1/2ν) ∫₀ˣ v₀)` for [`two_bump_velocity`].
pub fn two_bump_heat_initial(nu: f64, x: f64) -> f64 {
    (-((x - 5.0).atan() + (x + 5.0).atan()) / (2.0 * nu)).exp()
}

/// Burgers velocity evolved from the two-hump profile via the heat kernel.
pub fn two_bump_burgers(nu: f64, x: f64, t: f64) -> Result<f64> {
    let f0 = |y| two_bump_heat_initial(nu, y);
    let f = heat_kernel_convolve(nu, f0, x, t)?;
    let fx = heat_kernel_convolve_dx(nu, f0, x, t)?;
    cole_hopf(nu, |_| f, Some(&|_| fx), x)
}
