//! Continuous-time random walk on the integer lattice: exponential waiting
//! times with mean `τ`, and at each event a jump to a neighbour with total
//! probability `α` (split evenly) or a hold with probability `1 − α`.

use std::collections::BTreeMap;

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{domain, Result};
use crate::numerics::{bessel_i_scaled, ln_gamma, RandomStream};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkParams {
    pub alpha: f64,
    pub tau: f64,
}

impl WalkParams {
    pub fn new(alpha: f64, tau: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return domain(format!("jump probability must lie in [0, 1], got {alpha}"));
        }
        if !(tau > 0.0) {
            return domain(format!("mean waiting time must be positive, got {tau}"));
        }
        Ok(Self { alpha, tau })
    }

    pub fn beta(&self) -> f64 {
        1.0 - self.alpha
    }

    /// `z = α t / τ`, the Bessel argument of the occupation law.
    pub fn z(&self, t: f64) -> f64 {
        self.alpha * t / self.tau
    }
}

/// Site histogram produced by [`simulate`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EmpiricalLaw {
    pub counts: BTreeMap<i64, u64>,
    pub n_samples: u64,
    pub t: f64,
}

impl EmpiricalLaw {
    pub fn merge(&mut self, other: &EmpiricalLaw) {
        for (&m, &c) in &other.counts {
            *self.counts.entry(m).or_default() += c;
        }
        self.n_samples += other.n_samples;
    }

    pub fn count(&self, m: i64) -> u64 {
        self.counts.get(&m).copied().unwrap_or(0)
    }

    pub fn mean(&self) -> f64 {
        let n = self.n_samples as f64;
        self.counts.iter().map(|(&m, &c)| m as f64 * c as f64).sum::<f64>() / n
    }

    /// Second moment about the origin.
    pub fn second_moment(&self) -> f64 {
        let n = self.n_samples as f64;
        self.counts.iter().map(|(&m, &c)| (m * m) as f64 * c as f64).sum::<f64>() / n
    }

    /// Standard error of the second-moment estimate.
    pub fn second_moment_stderr(&self) -> f64 {
        let n = self.n_samples as f64;
        let m2 = self.second_moment();
        let m4 = self.counts.iter().map(|(&m, &c)| (m as f64).powi(4) * c as f64).sum::<f64>() / n;
        ((m4 - m2 * m2) / n).sqrt()
    }
}

/// Poisson probability of `n` events by time `t`, computed in log space.
pub fn jump_count_pmf(p: &WalkParams, n: u64, t: f64) -> f64 {
    let mean = t / p.tau;
    if mean == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let nf = n as f64;
    (nf * mean.ln() - mean - ln_gamma(nf + 1.0).unwrap()).exp()
}

/// Dispersion `α t / τ`.
pub fn dispersion(p: &WalkParams, t: f64) -> f64 {
    p.z(t)
}

/// `f(m, t) = e^{−αt/τ} I_m(αt/τ)`.
pub fn occupation(p: &WalkParams, m: i64, t: f64) -> f64 {
    bessel_i_scaled(m, p.z(t)).expect("argument is finite and nonnegative")
}

/// Leading large-`t` value `1/√(2π αt/τ)`.
pub fn occupation_asymptotic(p: &WalkParams, t: f64) -> f64 {
    1.0 / (2.0 * std::f64::consts::PI * p.z(t)).sqrt()
}

/// Site cutoff `|m| ≤ mean + 12√mean + 20` with `mean = αt/τ`.
pub fn site_cutoff(p: &WalkParams, t: f64) -> i64 {
    let mean = p.z(t);
    (mean + 12.0 * mean.sqrt() + 20.0).ceil() as i64
}

/// Single-event law: `{−1: α/2, 0: 1 − α, +1: α/2}`, convolved `n` times.
/// Index `n + m` holds the probability of displacement `m`.
pub fn n_step_law(p: &WalkParams, n: usize) -> Vec<f64> {
    let mut law = vec![1.0];
    let half = 0.5 * p.alpha;
    for _ in 0..n {
        let mut next = vec![0.0; law.len() + 2];
        for (i, &w) in law.iter().enumerate() {
            next[i] += half * w;
            next[i + 1] += p.beta() * w;
            next[i + 2] += half * w;
        }
        law = next;
    }
    law
}

/// `Σ_n p(t, n) h_n(m)` truncated at `n_max` events.
pub fn occupation_mixture(p: &WalkParams, m: i64, t: f64, n_max: usize) -> f64 {
    let mut total = 0.0;
    let mut law = vec![1.0];
    let half = 0.5 * p.alpha;
    for n in 0..=n_max {
        let idx = n as i64 + m;
        if idx >= 0 && (idx as usize) < law.len() {
            total += jump_count_pmf(p, n as u64, t) * law[idx as usize];
        }
        let mut next = vec![0.0; law.len() + 2];
        for (i, &w) in law.iter().enumerate() {
            next[i] += half * w;
            next[i + 1] += p.beta() * w;
            next[i + 2] += half * w;
        }
        law = next;
    }
    total
}

/// Event-driven Monte Carlo of `n_samples` walkers up to time `t`.
pub fn simulate(p: &WalkParams, t: f64, n_samples: u64, stream: &mut RandomStream) -> Result<EmpiricalLaw> {
    if n_samples == 0 {
        return domain("need at least one sample");
    }
    if !(t >= 0.0) {
        return domain("time must be nonnegative");
    }
    let mut law = EmpiricalLaw {
        t,
        ..Default::default()
    };
    let half = 0.5 * p.alpha;
    for _ in 0..n_samples {
        let mut clock = stream.exponential(p.tau);
        let mut m = 0i64;
        while clock <= t {
            let u = stream.uniform();
            if u < half {
                m -= 1;
            } else if u < p.alpha {
                m += 1;
            }
            clock += stream.exponential(p.tau);
        }
        *law.counts.entry(m).or_default() += 1;
    }
    law.n_samples = n_samples;
    Ok(law)
}

/// Run [`simulate`] in `shards` pieces, shard `i` drawing from stream
/// `(seed, first_stream + i)`, and merge the histograms.
pub fn simulate_sharded(
    p: &WalkParams,
    t: f64,
    n_samples: u64,
    seed: u64,
    first_stream: u64,
    shards: u64,
) -> Result<EmpiricalLaw> {
    let shards = shards.max(1);
    let results: Vec<Result<EmpiricalLaw>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..shards)
            .map(|i| {
                let n = n_samples / shards + u64::from(i < n_samples % shards);
                scope.spawn(move || {
                    if n == 0 {
                        return Ok(EmpiricalLaw { t, ..Default::default() });
                    }
                    simulate(p, t, n, &mut RandomStream::new(seed, first_stream + i))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("walk shard panicked")).collect()
    });
    let mut merged = EmpiricalLaw {
        t,
        ..Default::default()
    };
    for r in results {
        merged.merge(&r?);
    }
    Ok(merged)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson χ² of the empirical histogram against the closed-form law over
/// `|m| ≤ m_max`, with everything beyond pooled into one tail bin and
/// adjacent bins merged until each expects at least five counts.
pub fn chi_square_vs_occupation(p: &WalkParams, law: &EmpiricalLaw, m_max: i64) -> ChiSquareResult {
    let n = law.n_samples as f64;
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let mut inside_obs = 0.0;
    let mut inside_exp = 0.0;
    for m in -m_max..=m_max {
        let e = n * occupation(p, m, law.t);
        let o = law.count(m) as f64;
        inside_obs += o;
        inside_exp += e;
        bins.push((o, e));
    }
    bins.push((n - inside_obs, (n - inside_exp).max(0.0)));

    let mut merged: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for (o, e) in bins {
        acc.0 += o;
        acc.1 += e;
        if acc.1 >= 5.0 {
            merged.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.1 > 0.0 || acc.0 > 0.0 {
        match merged.last_mut() {
            Some(last) => {
                last.0 += acc.0;
                last.1 += acc.1;
            }
            None => merged.push(acc),
        }
    }
    let statistic: f64 = merged
        .iter()
        .filter(|(_, e)| *e > 0.0)
        .map(|(o, e)| (o - e) * (o - e) / e)
        .sum();
    let dof = merged.len().saturating_sub(1).max(1);
    let p_value = ChiSquared::new(dof as f64)
        .map(|d| d.sf(statistic))
        .unwrap_or(f64::NAN);
    ChiSquareResult {
        statistic,
        dof,
        p_value,
    }
}
