//! Closed-form and quadrature-based probability laws, generating functions
//! and transform identities for the time-changed and drifted Poisson
//! processes.

mod clock;
mod drift;
mod hitting;
mod pmf;
mod symbols;

pub use clock::{clock_density, clock_laplace};
pub use drift::{
    drifted_poisson_law, full_drift_density, full_drift_law, random_drift_density,
    random_drift_law, waiting_time_density,
};
pub use hitting::{hitting_boundary_u0, hitting_transform};
pub use pmf::{
    pgf_stf, pmf_auto, pmf_general_sub, pmf_quadrature, pmf_quadrature_row, pmf_stf,
    pmf_stf_row, pmf_tail_quadrature, space_frac_pmf, space_frac_pmf_bell, space_frac_pmf_row,
};
pub use symbols::{compose_g, compose_phi, levy_symbol_eval, JumpLaw, LevySymbolSpec};

use crate::error::{Error, Result};
use crate::specfun::FracOrder;
use serde::{Deserialize, Serialize};

/// Parameter bundle for the drifted, time-changed Poisson family:
/// space order α, time order β, jump order γ, rate λ, drift coefficients
/// a and b.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FracParams {
    pub alpha: FracOrder,
    pub beta: FracOrder,
    pub gamma: FracOrder,
    pub lambda: f64,
    #[serde(default)]
    pub a: f64,
    #[serde(default)]
    pub b: f64,
}

impl FracParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64, lambda: f64, a: f64, b: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::Domain(format!("lambda must be > 0, got {lambda}")));
        }
        if a < 0.0 || b < 0.0 {
            return Err(Error::Domain(format!("drift coefficients must be >= 0, got a={a}, b={b}")));
        }
        Ok(FracParams {
            alpha: FracOrder::new(alpha)?,
            beta: FracOrder::new(beta)?,
            gamma: FracOrder::new(gamma)?,
            lambda,
            a,
            b,
        })
    }

    /// Orders only, unit rate, no drift.
    pub fn orders(alpha: f64, beta: f64) -> Result<Self> {
        FracParams::new(alpha, beta, 1.0, 1.0, 0.0, 0.0)
    }
}

/// Probability table over ℕ₀ with explicit truncation bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscretePmf {
    pub weights: Vec<f64>,
    /// Mass beyond the stored range; weights plus this sum to 1.
    pub truncation_mass: f64,
}

impl DiscretePmf {
    /// Build from a pmf evaluator, stopping at cumulative mass
    /// `1 - mass_tol` or at index `cap`, whichever comes first.
    pub fn from_fn(mut pk: impl FnMut(usize) -> Result<f64>, mass_tol: f64, cap: usize) -> Result<Self> {
        let mut weights = Vec::new();
        let mut cum = 0.0;
        for k in 0..=cap {
            let w = pk(k)?;
            if w < -1e-9 {
                return Err(Error::NonConvergent(format!("pmf produced negative weight {w} at k={k}")));
            }
            let w = w.max(0.0);
            weights.push(w);
            cum += w;
            if 1.0 - cum <= mass_tol {
                break;
            }
        }
        if cum > 1.0 + 1e-9 {
            return Err(Error::NonConvergent(format!("pmf mass {cum} exceeds 1")));
        }
        Ok(DiscretePmf { weights, truncation_mass: (1.0 - cum).max(0.0) })
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum::<f64>() + self.truncation_mass
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Atom of a mixed law: location and weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub location: f64,
    pub weight: f64,
}

/// Probability measure with a lattice part and a continuous part.
#[derive(Clone)]
pub struct MixedLaw {
    /// Atoms sorted by location.
    pub atoms: Vec<Atom>,
    /// Continuous density evaluator, when a continuous part is present.
    pub density: Option<std::sync::Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>>,
    /// Mass carried by the continuous part.
    pub density_mass: f64,
}

impl std::fmt::Debug for MixedLaw {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MixedLaw")
            .field("atoms", &self.atoms.len())
            .field("atom_mass", &self.atom_mass())
            .field("density_mass", &self.density_mass)
            .finish()
    }
}

impl MixedLaw {
    pub fn from_atoms(mut atoms: Vec<Atom>) -> Result<Self> {
        if atoms.iter().any(|a| a.weight < 0.0) {
            return Err(Error::Domain("atom weights must be nonnegative".into()));
        }
        atoms.sort_by(|x, y| x.location.total_cmp(&y.location));
        Ok(MixedLaw { atoms, density: None, density_mass: 0.0 })
    }

    pub fn atom_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.atom_mass() + self.density_mass
    }

    /// Laplace transform 𝔼 e^{-ξX}: exact over atoms, adaptive quadrature
    /// over the continuous part.
    pub fn laplace(&self, xi: f64, upper: f64) -> Result<f64> {
        let mut v: f64 = self.atoms.iter().map(|a| a.weight * (-xi * a.location).exp()).sum();
        if let Some(d) = &self.density {
            let q = crate::quad::integrate(
                |x| (-xi * x).exp() * d(x).unwrap_or(f64::NAN),
                0.0,
                upper,
                1e-9,
            )?;
            v += q.value;
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn frac_params_validation() {
        assert!(FracParams::new(0.7, 0.8, 0.6, 1.0, 1.0, 0.0).is_ok());
        assert!(FracParams::new(0.0, 0.8, 0.6, 1.0, 1.0, 0.0).is_err());
        assert!(FracParams::new(0.7, 0.8, 0.6, 0.0, 1.0, 0.0).is_err());
        assert!(FracParams::new(0.7, 0.8, 0.6, 1.0, -0.5, 0.0).is_err());
    }

    #[test]
    fn discrete_pmf_bookkeeping() {
        // geometric pmf as a stand-in
        let pmf = DiscretePmf::from_fn(|k| Ok(0.5_f64.powi(k as i32 + 1)), 1e-9, 100).unwrap();
        assert_abs_diff_eq!(pmf.total_mass(), 1.0, epsilon = 1e-9);
        assert!(pmf.truncation_mass < 1e-9);
        // truncated early: mass accounted for
        let pmf = DiscretePmf::from_fn(|k| Ok(0.5_f64.powi(k as i32 + 1)), 1e-9, 3).unwrap();
        assert_abs_diff_eq!(pmf.total_mass(), 1.0, epsilon = 1e-12);
        assert!(pmf.truncation_mass > 0.05);
    }

    #[test]
    fn mixed_law_atoms_sorted_and_transformed() {
        let law = MixedLaw::from_atoms(vec![
            Atom { location: 2.0, weight: 0.5 },
            Atom { location: 0.0, weight: 0.5 },
        ])
        .unwrap();
        assert!(law.atoms[0].location < law.atoms[1].location);
        let l = law.laplace(1.0, 10.0).unwrap();
        assert_abs_diff_eq!(l, 0.5 + 0.5 * (-2.0_f64).exp(), epsilon = 1e-14);
    }
}
