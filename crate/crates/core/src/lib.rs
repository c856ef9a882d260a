//! Laws, fractional operators, Monte Carlo samplers and verification
//! oracles for time-changed Poisson processes with random drift.
//!
//! Layout:
//! * [`specfun`] — Mittag-Leffler / Wright kernel and stable densities,
//! * [`fracops`] — discretized fractional and difference operators,
//! * [`laws`] — closed-form and quadrature-based probability laws,
//! * [`sim`] — seeded samplers for every random object,
//! * [`verify`] — the identity checks, each emitting a machine-readable report,
//! * [`quad`] — the adaptive Gauss–Kronrod workhorse behind the transforms.

pub mod error;
pub mod fracops;
pub mod laws;
pub mod quad;
pub mod sim;
pub mod specfun;

pub use error::{Error, Result};
