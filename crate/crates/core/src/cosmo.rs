//! Thermal history of a radiation-dominated Friedmann universe with
//! constant effective degrees of freedom.
//!
//! Units are natural (`c = ħ = k_B = 1`) with `G` supplied by the caller.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::numerics::{Dopri5, OdeSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CosmoParams {
    /// Spatial curvature sign.
    pub k: i32,
    /// Effective number of relativistic degrees of freedom.
    pub n_dof: f64,
    /// Total comoving entropy.
    pub entropy: f64,
    pub g: f64,
    /// Follow the contracting (heating) branch instead of expansion.
    pub contracting: bool,
}

impl CosmoParams {
    pub fn new(k: i32, n_dof: f64, entropy: f64, g: f64) -> Result<Self> {
        if !(-1..=1).contains(&k) {
            return domain(format!("curvature sign must be -1, 0 or 1, got {k}"));
        }
        if !(n_dof > 0.0 && entropy > 0.0 && g > 0.0) {
            return domain("N, S and G must be positive");
        }
        Ok(Self {
            k,
            n_dof,
            entropy,
            g,
            contracting: false,
        })
    }

    /// Flat universe with unit constants.
    pub fn flat() -> Self {
        Self::new(0, 1.0, 1.0, 1.0).unwrap()
    }

    /// `(4π³/45) G N`, the coefficient of `T⁴` in the temperature equation.
    pub fn friedmann_coeff(&self) -> f64 {
        4.0 * PI.powi(3) / 45.0 * self.g * self.n_dof
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermalState {
    pub t: f64,
    pub temperature: f64,
    pub a: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thermo {
    pub rho: f64,
    pub pressure: f64,
    pub entropy_density: f64,
}

/// Curvature term `ε = k (2π² N / 45 S)^{2/3}`.
pub fn epsilon(p: &CosmoParams) -> f64 {
    let base = 2.0 * PI * PI * p.n_dof / (45.0 * p.entropy);
    p.k as f64 * base.powf(2.0 / 3.0)
}

/// `(Ṫ/T)²` as required by the temperature equation.
pub fn rhs_sq(p: &CosmoParams, temperature: f64) -> f64 {
    let t2 = temperature * temperature;
    p.friedmann_coeff() * t2 * t2 - epsilon(p) * t2
}

/// Temperature at which a closed universe stops expanding.
pub fn turnaround_temperature(p: &CosmoParams) -> Option<f64> {
    let eps = epsilon(p);
    (eps > 0.0).then(|| (eps / p.friedmann_coeff()).sqrt())
}

/// `Ṫ` on the cooling branch (heating if `p.contracting`).
pub fn temperature_rate(p: &CosmoParams, temperature: f64) -> Result<f64> {
    let r = rhs_sq(p, temperature);
    if r < 0.0 {
        return Err(Error::Turnaround {
            t: f64::NAN,
            temperature,
            partial: Vec::new(),
        });
    }
    let sign = if p.contracting { 1.0 } else { -1.0 };
    Ok(sign * temperature * r.sqrt())
}

pub fn thermo(p: &CosmoParams, temperature: f64) -> Thermo {
    let t3 = temperature.powi(3);
    let rho = PI * PI / 30.0 * p.n_dof * t3 * temperature;
    Thermo {
        rho,
        pressure: rho / 3.0,
        entropy_density: 2.0 * PI * PI / 45.0 * p.n_dof * t3,
    }
}

/// Closed-form flat-space cooling law `T(t) = T₀ / √(1 + 2 C T₀² t)`.
pub fn flat_closed_form(p: &CosmoParams, t0_temp: f64, t: f64) -> f64 {
    let c = p.friedmann_coeff().sqrt();
    t0_temp / (1.0 + 2.0 * c * t0_temp * t0_temp * t).sqrt()
}

/// Integrate from `T0` (with `a = 1`) to `t_end`, recording every accepted
/// step.
pub fn evolve(p: &CosmoParams, t0_temp: f64, t_end: f64, spec: &OdeSpec) -> Result<Vec<ThermalState>> {
    evolve_inner(p, t0_temp, t_end, None, spec)
}

/// As [`evolve`] but reporting the state at the requested (increasing) times.
pub fn evolve_sampled(
    p: &CosmoParams,
    t0_temp: f64,
    times: &[f64],
    spec: &OdeSpec,
) -> Result<Vec<ThermalState>> {
    let t_end = times.last().copied().unwrap_or(0.0);
    evolve_inner(p, t0_temp, t_end, Some(times), spec)
}

fn evolve_inner(
    p: &CosmoParams,
    t0_temp: f64,
    t_end: f64,
    times: Option<&[f64]>,
    spec: &OdeSpec,
) -> Result<Vec<ThermalState>> {
    if !(t0_temp > 0.0) {
        return domain("initial temperature must be positive");
    }
    if !(t_end > 0.0) {
        return domain("t_end must be positive");
    }
    if rhs_sq(p, t0_temp) <= 0.0 {
        return Err(Error::Turnaround {
            t: 0.0,
            temperature: t0_temp,
            partial: Vec::new(),
        });
    }
    if let Some(ts) = times {
        if ts.windows(2).any(|w| w[1] < w[0]) || ts.first().is_some_and(|&t| t < 0.0) {
            return domain("sample times must be nonnegative and increasing");
        }
    }
    let coeff = p.friedmann_coeff();
    let eps = epsilon(p);
    let sign = if p.contracting { 1.0 } else { -1.0 };
    // State (T, a); the Hubble rate is ȧ/a = -Ṫ/T.
    let rhs = move |_t: f64, y: &[f64], dy: &mut [f64]| {
        let t2 = y[0] * y[0];
        let h = (coeff * t2 * t2 - eps * t2).max(0.0).sqrt();
        dy[0] = sign * y[0] * h;
        dy[1] = -sign * y[1] * h;
    };
    let scale = coeff * t0_temp.powi(4);
    let mut out = Vec::new();
    let state = |t: f64, y: &[f64]| ThermalState {
        t,
        temperature: y[0],
        a: y[1],
    };
    let mut next = 0;
    match times {
        None => out.push(state(0.0, &[t0_temp, 1.0])),
        Some(ts) => {
            while next < ts.len() && ts[next] == 0.0 {
                out.push(state(0.0, &[t0_temp, 1.0]));
                next += 1;
            }
        }
    }
    let mut solver = Dopri5::new(rhs, 0.0, &[t0_temp, 1.0], t_end, *spec);
    while solver.t() < t_end {
        solver.step(t_end)?;
        let (t, y) = (solver.t(), solver.y());
        match times {
            None => out.push(state(t, y)),
            Some(ts) => {
                let dense = solver.dense().expect("a step was taken");
                while next < ts.len() && ts[next] <= t {
                    let ys = if ts[next] == t { y.to_vec() } else { dense.eval(ts[next]) };
                    out.push(state(ts[next], &ys));
                    next += 1;
                }
            }
        }
        let r = rhs_sq(p, y[0]);
        if eps > 0.0 && !p.contracting && r <= 1e-12 * scale {
            return Err(Error::Turnaround {
                t,
                temperature: y[0],
                partial: out,
            });
        }
    }
    Ok(out)
}

/// Largest relative deviation of `a·T` from its initial value.
pub fn at_drift(traj: &[ThermalState]) -> f64 {
    let Some(first) = traj.first() else { return 0.0 };
    let c0 = first.a * first.temperature;
    traj.iter()
        .map(|s| (s.a * s.temperature / c0 - 1.0).abs())
        .fold(0.0, f64::max)
}

/// Largest relative deviation of the comoving entropy `s a³`.
pub fn entropy_drift(p: &CosmoParams, traj: &[ThermalState]) -> f64 {
    let Some(first) = traj.first() else { return 0.0 };
    let comoving = |s: &ThermalState| thermo(p, s.temperature).entropy_density * s.a.powi(3);
    let c0 = comoving(first);
    traj.iter()
        .map(|s| (comoving(s) / c0 - 1.0).abs())
        .fold(0.0, f64::max)
}

/// Relative Friedmann residual `|(Ṫ/T)² + εT² − C T⁴| / (C T⁴)` at each
/// probe time, with `Ṫ` from a five-point stencil of step `h` on the
/// integrated trajectory.
pub fn friedmann_residuals(
    p: &CosmoParams,
    t0_temp: f64,
    probes: &[f64],
    h: f64,
    spec: &OdeSpec,
) -> Result<Vec<f64>> {
    let mut times = Vec::with_capacity(probes.len() * 5);
    for &t in probes {
        for j in -2..=2 {
            times.push(t + j as f64 * h);
        }
    }
    let states = evolve_sampled(p, t0_temp, &times, spec)?;
    let eps = epsilon(p);
    let coeff = p.friedmann_coeff();
    Ok(states
        .chunks(5)
        .map(|w| {
            let tdot = (w[0].temperature - 8.0 * w[1].temperature + 8.0 * w[3].temperature
                - w[4].temperature)
                / (12.0 * h);
            let temp = w[2].temperature;
            let t2 = temp * temp;
            let lhs = (tdot / temp).powi(2) + eps * t2;
            (lhs - coeff * t2 * t2).abs() / (coeff * t2 * t2)
        })
        .collect())
}

/// Comoving energy balance `d(ρa³)/dt + p d(a³)/dt` relative to
/// `|d(ρa³)/dt|`-scale terms, by central differences at each probe.
pub fn energy_balance_residuals(
    p: &CosmoParams,
    t0_temp: f64,
    probes: &[f64],
    h: f64,
    spec: &OdeSpec,
) -> Result<Vec<f64>> {
    let mut times = Vec::with_capacity(probes.len() * 3);
    for &t in probes {
        times.extend([t - h, t, t + h]);
    }
    let states = evolve_sampled(p, t0_temp, &times, spec)?;
    Ok(states
        .chunks(3)
        .map(|w| {
            let e = |s: &ThermalState| thermo(p, s.temperature).rho * s.a.powi(3);
            let v = |s: &ThermalState| s.a.powi(3);
            let de = (e(&w[2]) - e(&w[0])) / (2.0 * h);
            let dv = (v(&w[2]) - v(&w[0])) / (2.0 * h);
            let pr = thermo(p, w[1].temperature).pressure;
            (de + pr * dv).abs() / (pr * dv).abs().max(f64::MIN_POSITIVE)
        })
        .collect())
}
