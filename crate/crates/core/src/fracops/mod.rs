//! Discretized fractional and difference operators: the Caputo L1 scheme,
//! Grünwald–Letnikov and right-sided Riemann-Liouville derivatives, the
//! fractional power of the identity-minus-shift, the drifted Poisson
//! transition semigroup and the Bernstein-function operator catalog.

mod caputo;
mod discrete;
mod riemann_liouville;

pub use caputo::caputo_derivative;
pub use discrete::{
    bernstein_psi, falling, frac_binomial_coeffs, frac_difference, poisson_row,
    poisson_semigroup_apply, poisson_tail_above, psi_operator, shift_continuous, shift_discrete,
    PsiSpec,
};
pub use riemann_liouville::{rl_derivative_left0, rl_derivative_rightsided};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Uniform one-dimensional grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub start: f64,
    pub step: f64,
    pub count: usize,
}

impl Grid1D {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self> {
        if !(step > 0.0) || count < 2 {
            return Err(Error::Grid(format!(
                "grid needs step > 0 and count >= 2, got step={step}, count={count}"
            )));
        }
        Ok(Grid1D { start, step, count })
    }

    /// Grid covering [start, end] with `count` points.
    pub fn over(start: f64, end: f64, count: usize) -> Result<Self> {
        if !(end > start) {
            return Err(Error::Grid(format!("need end > start, got [{start}, {end}]")));
        }
        Grid1D::new(start, (end - start) / (count as f64 - 1.0), count)
    }

    pub fn point(&self, i: usize) -> f64 {
        self.start + self.step * i as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.point(i))
    }
}

/// Function sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledFn {
    pub grid: Grid1D,
    pub values: Vec<f64>,
}

impl SampledFn {
    pub fn new(grid: Grid1D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.count {
            return Err(Error::Grid(format!(
                "value length {} does not match grid count {}",
                values.len(),
                grid.count
            )));
        }
        Ok(SampledFn { grid, values })
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.points().map(f).collect();
        SampledFn { grid, values }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_construction() {
        let g = Grid1D::over(0.0, 1.0, 11).unwrap();
        assert!((g.step - 0.1).abs() < 1e-15);
        assert!((g.point(10) - 1.0).abs() < 1e-12);
        assert!(Grid1D::new(0.0, 0.0, 5).is_err());
        assert!(Grid1D::new(0.0, 0.1, 1).is_err());
    }

    #[test]
    fn sampled_fn_shape_check() {
        let g = Grid1D::over(0.0, 1.0, 5).unwrap();
        assert!(SampledFn::new(g, vec![0.0; 4]).is_err());
        let s = SampledFn::from_fn(g, |x| x * x);
        assert_eq!(s.values.len(), 5);
    }
}
