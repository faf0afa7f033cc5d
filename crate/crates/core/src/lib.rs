//! Closed-form solutions of a set of mathematical-physics problems together
//! with the independent numerical oracles used to verify them.

pub mod cosmo;
pub mod electrostatics;
pub mod error;
pub mod heatburgers;
pub mod higgs;
pub mod mechanics;
pub mod numerics;
pub mod quantum;
pub mod report;
pub mod suites;
pub mod ultrametric;
pub mod volterra;
pub mod walk;

pub use error::{Error, Result};
