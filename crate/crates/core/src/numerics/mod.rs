//! Shared numerical kernels.

pub mod fit;
pub mod ode;
pub mod quadrature;
pub mod random;
pub mod roots;
pub mod special;

pub use fit::{halving_orders, linear_fit, loglog_slope};
pub use ode::{integrate_ode, DenseStep, Dopri5, OdeSpec, Trajectory};
pub use quadrature::{integrate, integrate_pieces, integrate_to_infinity, QuadratureSpec};
pub use random::{sample_exponential, RandomStream};
pub use roots::{find_root, minimize_golden, scan_bracket};
pub use special::{bessel_i, bessel_i_scaled, gamma, ln_gamma};
