//! Heat kernels, branching Brownian motion and the pseudo-complex field
//! picture of diffusion.
//!
//! * [`pring`]: the pseudo-complex ring `a + I b`, `I² = 1`.
//! * [`kernels`]: Gaussian transition densities, semigroup application,
//!   the clock-dressed retarded propagator and pseudo-complex time evolution.
//! * [`montecarlo`]: seeded, replica-parallel simulation of Brownian paths and
//!   branching trees, with estimators for every analytic quantity below.
//! * [`dyson`]: closed-form, ODE and Picard solvers for the one- and two-point
//!   functions of binary branching Brownian motion.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dyson;
pub mod error;
pub mod grid;
pub mod kernels;
pub mod montecarlo;
pub mod pring;
pub mod quadrature;
pub mod rng;

pub use error::{Error, Result};
pub use grid::{Grid1d, SampledCurve, SampledFunction};
pub use kernels::{SpacePoint, SpaceTimePoint};
pub use pring::{Branch, PseudoComplex, RingOp};

/// Library version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
