//! Reproducible random streams keyed by `(seed, stream_id)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A seeded ChaCha8 stream. Distinct `stream_id`s under one seed give
/// independent sequences, so Monte Carlo shards can run in parallel and
/// still replay exactly.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform draw on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform draw on `[lo, hi)`.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Exponential draw with mean `tau`.
    pub fn exponential(&mut self, tau: f64) -> f64 {
        // 1 - u lies in (0, 1], so the logarithm is finite.
        -tau * (1.0 - self.uniform()).ln()
    }
}

/// Draw one exponential variate with density `(1/τ) e^{-t/τ}`.
pub fn sample_exponential(stream: &mut RandomStream, tau: f64) -> f64 {
    stream.exponential(tau)
}
