use thiserror::Error;

use crate::cosmo::ThermalState;

/// Errors raised by the numerical kernels and the problem modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("adaptive quadrature did not converge after {subdivisions} subdivisions (error estimate {estimate:e})")]
    NonConvergence { subdivisions: usize, estimate: f64 },

    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },

    #[error("required step {step:e} fell below the minimum step at t = {t}")]
    StepUnderflow { t: f64, step: f64 },

    #[error("no sign change on bracket [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("singular point: {0}")]
    SingularPoint(String),

    /// The closed-universe expansion reached its maximum; the trajectory up to
    /// that point is carried along.
    #[error("expansion turnaround reached at t = {t} (T = {temperature})")]
    Turnaround {
        t: f64,
        temperature: f64,
        partial: Vec<ThermalState>,
    },

    #[error("degenerate vacuum: both vevs vanish")]
    DegenerateVev,

    #[error("quadratic has complex roots (discriminant {discriminant:e})")]
    ComplexRoots { discriminant: f64 },

    #[error("denominator {value:e} below threshold")]
    ZeroDenominator { value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
