//! Special-function kernel: Mittag-Leffler, Wright, and the stable /
//! inverse-stable densities every law in this crate is written in.

pub mod gamma;
mod mittag_leffler;
mod wright;

pub use mittag_leffler::{
    ml_asymptotic, mittag_leffler, mittag_leffler_deriv, mittag_leffler_with, SERIES_RADIUS,
};
pub use wright::{
    inv_stable_density, stable_density, unit_stable_pdf, unit_stable_pdf_zolotarev, wright,
    wright_with,
};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Value of a series / quadrature evaluation with its certified error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: f64,
    /// Upper bound on the truncation + rounding error of `value`.
    pub abs_error_estimate: f64,
    pub terms_used: usize,
}

/// Fractional order in (0, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct FracOrder(f64);

impl FracOrder {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && 0.0 < value && value <= 1.0 {
            Ok(FracOrder(value))
        } else {
            Err(Error::Domain(format!("fractional order must lie in (0,1], got {value}")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// True for the degenerate order 1 (identity clock).
    pub fn is_one(self) -> bool {
        self.0 == 1.0
    }
}

impl TryFrom<f64> for FracOrder {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        FracOrder::new(v)
    }
}

impl From<FracOrder> for f64 {
    fn from(v: FracOrder) -> f64 {
        v.0
    }
}

/// Series evaluation controls shared by the kernel functions.
#[derive(Debug, Clone, Copy)]
pub struct SeriesConfig {
    /// Relative tolerance target.
    pub tol: f64,
    /// Hard cap on the number of series terms.
    pub term_cap: usize,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig { tol: 1e-12, term_cap: 10_000 }
    }
}
