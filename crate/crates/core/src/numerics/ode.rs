//! Dormand–Prince 5(4) integrator with PI step-size control and the
//! standard fourth-order continuous extension.

use crate::error::{Error, Result};

/// Step-size controls for [`integrate_ode`] and [`Dopri5`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_step: f64,
    pub min_step: f64,
}

impl OdeSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_step: f64, min_step: f64) -> Result<Self> {
        if !(abs_tol > 0.0 && rel_tol > 0.0) {
            return Err(Error::Domain("ODE tolerances must be positive".into()));
        }
        if !(min_step > 0.0 && min_step <= max_step) {
            return Err(Error::Domain("need 0 < min_step <= max_step".into()));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_step,
            min_step,
        })
    }

    pub fn tight() -> Self {
        Self {
            abs_tol: 1e-14,
            rel_tol: 1e-12,
            max_step: f64::INFINITY,
            min_step: 1e-14,
        }
    }

    pub fn with_max_step(mut self, max_step: f64) -> Self {
        self.max_step = max_step;
        self
    }
}

impl Default for OdeSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_step: f64::INFINITY,
            min_step: 1e-12,
        }
    }
}

/// Sampled solution: `t[i]` with state `y[i]`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub y: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn last(&self) -> Option<(f64, &[f64])> {
        self.t.last().map(|&t| (t, self.y.last().unwrap().as_slice()))
    }

    pub fn component(&self, i: usize) -> Vec<f64> {
        self.y.iter().map(|y| y[i]).collect()
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

/// Interpolant over the last accepted step.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseStep {
    pub t0: f64,
    pub h: f64,
    rcont: [Vec<f64>; 5],
}

impl DenseStep {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    pub fn eval_into(&self, t: f64, out: &mut [f64]) {
        let theta = (t - self.t0) / self.h;
        let theta1 = 1.0 - theta;
        let [r1, r2, r3, r4, r5] = &self.rcont;
        for i in 0..out.len() {
            out[i] = r1[i] + theta * (r2[i] + theta1 * (r3[i] + theta * (r4[i] + theta1 * r5[i])));
        }
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.rcont[0].len()];
        self.eval_into(t, &mut out);
        out
    }
}

/// Stepper exposing individual accepted steps and their dense output.
pub struct Dopri5<F> {
    rhs: F,
    spec: OdeSpec,
    t: f64,
    y: Vec<f64>,
    k1: Vec<f64>,
    h: f64,
    facold: f64,
    stages: [Vec<f64>; 6],
    ytmp: Vec<f64>,
    ynew: Vec<f64>,
    dense: Option<DenseStep>,
    pub accepted: usize,
    pub rejected: usize,
}

impl<F: FnMut(f64, &[f64], &mut [f64])> Dopri5<F> {
    pub fn new(mut rhs: F, t0: f64, y0: &[f64], t_dir_hint: f64, spec: OdeSpec) -> Self {
        let n = y0.len();
        let mut k1 = vec![0.0; n];
        rhs(t0, y0, &mut k1);
        let mut s = Self {
            rhs,
            spec,
            t: t0,
            y: y0.to_vec(),
            k1,
            h: 0.0,
            facold: 1e-4,
            stages: std::array::from_fn(|_| vec![0.0; n]),
            ytmp: vec![0.0; n],
            ynew: vec![0.0; n],
            dense: None,
            accepted: 0,
            rejected: 0,
        };
        s.h = s.initial_step(t_dir_hint);
        s
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn dense(&self) -> Option<&DenseStep> {
        self.dense.as_ref()
    }

    fn scale(&self, a: f64, b: f64) -> f64 {
        self.spec.abs_tol + self.spec.rel_tol * a.abs().max(b.abs())
    }

    fn initial_step(&mut self, dir_hint: f64) -> f64 {
        let dir = if dir_hint < 0.0 { -1.0 } else { 1.0 };
        let n = self.y.len().max(1) as f64;
        let mut d0 = 0.0;
        let mut d1 = 0.0;
        for i in 0..self.y.len() {
            let sk = self.scale(self.y[i], self.y[i]);
            d0 += (self.y[i] / sk).powi(2);
            d1 += (self.k1[i] / sk).powi(2);
        }
        d0 = (d0 / n).sqrt();
        d1 = (d1 / n).sqrt();
        let mut h0 = if d0 < 1e-10 || d1 < 1e-10 {
            1e-6
        } else {
            0.01 * d0 / d1
        };
        h0 = h0.min(self.spec.max_step).min(dir_hint.abs().max(self.spec.min_step));
        for i in 0..self.y.len() {
            self.ytmp[i] = self.y[i] + dir * h0 * self.k1[i];
        }
        let mut k2 = vec![0.0; self.y.len()];
        (self.rhs)(self.t + dir * h0, &self.ytmp, &mut k2);
        let mut d2 = 0.0;
        for i in 0..self.y.len() {
            let sk = self.scale(self.y[i], self.y[i]);
            d2 += ((k2[i] - self.k1[i]) / sk).powi(2);
        }
        d2 = (d2 / n).sqrt() / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        dir * (100.0 * h0).min(h1).min(self.spec.max_step)
    }

    /// Advance by one accepted step without passing `t_end`.
    pub fn step(&mut self, t_end: f64) -> Result<()> {
        let dir = if t_end >= self.t { 1.0 } else { -1.0 };
        if self.h * dir <= 0.0 {
            self.h = dir * self.h.abs().max(self.spec.min_step);
        }
        let n = self.y.len();
        loop {
            let mut h = self.h;
            if h.abs() > self.spec.max_step {
                h = dir * self.spec.max_step;
            }
            let remaining = t_end - self.t;
            let last = (self.t + h - t_end) * dir >= 0.0 || (remaining - h).abs() < 1e-12 * h.abs();
            if last {
                h = remaining;
            }
            if !last && h.abs() < self.spec.min_step {
                return Err(Error::StepUnderflow {
                    t: self.t,
                    step: h.abs(),
                });
            }
            let t = self.t;
            let y = &self.y;
            let k1 = &self.k1;
            let [k2, k3, k4, k5, k6, k7] = &mut self.stages;
            let ytmp = &mut self.ytmp;
            let ynew = &mut self.ynew;
            for i in 0..n {
                ytmp[i] = y[i] + h * A21 * k1[i];
            }
            (self.rhs)(t + C2 * h, ytmp, k2);
            for i in 0..n {
                ytmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
            }
            (self.rhs)(t + C3 * h, ytmp, k3);
            for i in 0..n {
                ytmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
            }
            (self.rhs)(t + C4 * h, ytmp, k4);
            for i in 0..n {
                ytmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
            }
            (self.rhs)(t + C5 * h, ytmp, k5);
            for i in 0..n {
                ytmp[i] = y[i]
                    + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
            }
            (self.rhs)(t + h, ytmp, k6);
            for i in 0..n {
                ynew[i] = y[i]
                    + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
            }
            (self.rhs)(t + h, ynew, k7);

            let mut err = 0.0;
            for i in 0..n {
                let e = h
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i]
                        + E7 * k7[i]);
                let sk = self.spec.abs_tol + self.spec.rel_tol * y[i].abs().max(ynew[i].abs());
                err += (e / sk).powi(2);
            }
            err = (err / n.max(1) as f64).sqrt();
            if !err.is_finite() {
                err = 1e10;
            }

            let expo = 0.2 - BETA * 0.75;
            let fac11 = err.powf(expo);
            if err <= 1.0 {
                let fac = (fac11 / self.facold.powf(BETA) / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
                self.facold = err.max(1e-4);
                let mut rcont: [Vec<f64>; 5] = std::array::from_fn(|_| vec![0.0; n]);
                for i in 0..n {
                    let ydiff = ynew[i] - y[i];
                    let bspl = h * k1[i] - ydiff;
                    rcont[0][i] = y[i];
                    rcont[1][i] = ydiff;
                    rcont[2][i] = bspl;
                    rcont[3][i] = ydiff - h * k7[i] - bspl;
                    rcont[4][i] = h
                        * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i]
                            + D7 * k7[i]);
                }
                self.dense = Some(DenseStep { t0: t, h, rcont });
                self.t = if last { t_end } else { t + h };
                std::mem::swap(&mut self.y, &mut self.ynew);
                self.k1.copy_from_slice(k7);
                self.accepted += 1;
                let hnew = h / fac;
                // Keep the controller's proposal even after a clamped final step.
                if !last || hnew.abs() > self.h.abs() {
                    self.h = hnew;
                }
                return Ok(());
            }
            self.rejected += 1;
            let shrink = (fac11 / SAFETY).min(1.0 / FAC_MIN);
            self.h = h / shrink;
            if self.h.abs() < self.spec.min_step {
                return Err(Error::StepUnderflow {
                    t: self.t,
                    step: self.h.abs(),
                });
            }
        }
    }
}

/// Integrate `y' = rhs(t, y)` over `t_span`.
///
/// With an empty `sample_times` every accepted step is recorded; otherwise the
/// solution is reported at exactly those times via dense output. Sample times
/// must be monotone in the direction of integration and lie within `t_span`.
pub fn integrate_ode<F>(
    rhs: F,
    y0: &[f64],
    t_span: (f64, f64),
    sample_times: &[f64],
    spec: &OdeSpec,
) -> Result<Trajectory>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let (t0, t1) = t_span;
    if !(t0.is_finite() && t1.is_finite()) || t0 == t1 {
        return Err(Error::InvalidInterval { a: t0, b: t1 });
    }
    let dir = (t1 - t0).signum();
    for w in sample_times.windows(2) {
        if (w[1] - w[0]) * dir < 0.0 {
            return Err(Error::Domain("sample times must be monotone".into()));
        }
    }
    if let (Some(&first), Some(&last)) = (sample_times.first(), sample_times.last()) {
        if (first - t0) * dir < 0.0 || (last - t1) * dir > 0.0 {
            return Err(Error::Domain("sample times outside the integration span".into()));
        }
    }

    let mut out = Trajectory::default();
    let mut next = 0;
    if sample_times.is_empty() {
        out.t.push(t0);
        out.y.push(y0.to_vec());
    } else {
        while next < sample_times.len() && sample_times[next] == t0 {
            out.t.push(t0);
            out.y.push(y0.to_vec());
            next += 1;
        }
    }
    let mut solver = Dopri5::new(rhs, t0, y0, t1 - t0, *spec);
    while (t1 - solver.t()) * dir > 0.0 {
        solver.step(t1)?;
        if sample_times.is_empty() {
            out.t.push(solver.t());
            out.y.push(solver.y().to_vec());
        } else {
            let dense = solver.dense().expect("a step was taken");
            while next < sample_times.len() && (sample_times[next] - solver.t()) * dir <= 0.0 {
                let ts = sample_times[next];
                let y = if ts == solver.t() {
                    solver.y().to_vec()
                } else {
                    dense.eval(ts)
                };
                out.t.push(ts);
                out.y.push(y);
                next += 1;
            }
        }
    }
    Ok(out)
}
