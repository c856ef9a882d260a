//! Lévy symbols and their compositions with the Poisson and stable clocks,
//! evaluated on the real line with principal-branch fractional powers.
//!
//! Convention: 𝔼 e^{iξX(t)} = e^{-tΨ(ξ)}, so Ψ(0) = 0 and Re Ψ ≥ 0.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Jump law catalog for the compound Poisson component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum JumpLaw {
    Unit,
    Gaussian { mean: f64, std: f64 },
    Exponential { rate: f64 },
}

impl JumpLaw {
    /// Characteristic function of a single jump.
    pub fn char_fn(&self, xi: f64) -> Complex64 {
        let i = Complex64::new(0.0, 1.0);
        match *self {
            JumpLaw::Unit => (i * xi).exp(),
            JumpLaw::Gaussian { mean, std } => (i * mean * xi - 0.5 * std * std * xi * xi).exp(),
            JumpLaw::Exponential { rate } => rate / (rate - i * xi),
        }
    }
}

/// Symbol catalog of the driving Lévy process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LevySymbolSpec {
    /// Ψ(ξ) = -i b ξ + σ² ξ²/2
    Brownian { drift: f64, diffusion: f64 },
    /// Ψ(ξ) = rate (1 - φ_jump(ξ))
    CompoundPoisson { rate: f64, jumps: JumpLaw },
    /// Ψ(ξ) = (-iξ)^α, principal branch
    StableSubordinator { alpha: f64 },
    /// Ψ(ξ) = λ(1 - e^{iξ})
    PoissonSymbol { lambda: f64 },
}

impl LevySymbolSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            LevySymbolSpec::Brownian { diffusion, .. } => {
                if diffusion < 0.0 {
                    return Err(Error::Spec(format!("diffusion must be >= 0, got {diffusion}")));
                }
            }
            LevySymbolSpec::CompoundPoisson { rate, jumps } => {
                if !(rate > 0.0) {
                    return Err(Error::Spec(format!("jump rate must be > 0, got {rate}")));
                }
                match jumps {
                    JumpLaw::Gaussian { std, .. } if std < 0.0 => {
                        return Err(Error::Spec("gaussian jump std must be >= 0".into()))
                    }
                    JumpLaw::Exponential { rate } if rate <= 0.0 => {
                        return Err(Error::Spec("exponential jump rate must be > 0".into()))
                    }
                    _ => {}
                }
            }
            LevySymbolSpec::StableSubordinator { alpha } => {
                if !(0.0 < alpha && alpha < 1.0) {
                    return Err(Error::Spec(format!("stable symbol needs alpha in (0,1), got {alpha}")));
                }
            }
            LevySymbolSpec::PoissonSymbol { lambda } => {
                if !(lambda > 0.0) {
                    return Err(Error::Spec(format!("poisson symbol needs lambda > 0, got {lambda}")));
                }
            }
        }
        Ok(())
    }
}

/// Ψ(ξ) on the real line.
pub fn levy_symbol_eval(spec: &LevySymbolSpec, xi: f64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    match *spec {
        LevySymbolSpec::Brownian { drift, diffusion } => {
            -i * drift * xi + 0.5 * diffusion * xi * xi
        }
        LevySymbolSpec::CompoundPoisson { rate, jumps } => {
            rate * (Complex64::new(1.0, 0.0) - jumps.char_fn(xi))
        }
        LevySymbolSpec::StableSubordinator { alpha } => (-i * xi).powf(alpha),
        LevySymbolSpec::PoissonSymbol { lambda } => {
            lambda * (Complex64::new(1.0, 0.0) - (i * xi).exp())
        }
    }
}

/// Symbol of X(N(t) + at): Φ(ξ) = aΨ(ξ) + λ(1 - e^{-Ψ(ξ)}).
pub fn compose_phi(spec: &LevySymbolSpec, xi: f64, lambda: f64, a: f64) -> Complex64 {
    let psi = levy_symbol_eval(spec, xi);
    a * psi + lambda * (Complex64::new(1.0, 0.0) - (-psi).exp())
}

/// Symbol of X(N(𝔄^γ) + a𝔄^α):
/// g_{α,γ}(ξ) = (aΨ(ξ))^α + λ^γ (1 - e^{-Ψ(ξ)})^γ, principal branches.
pub fn compose_g(
    spec: &LevySymbolSpec,
    xi: f64,
    lambda: f64,
    a: f64,
    alpha: f64,
    gamma: f64,
) -> Complex64 {
    let psi = levy_symbol_eval(spec, xi);
    (a * psi).powf(alpha) + lambda.powf(gamma) * (Complex64::new(1.0, 0.0) - (-psi).exp()).powf(gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn symbols_vanish_at_zero() {
        let specs = [
            LevySymbolSpec::Brownian { drift: 1.0, diffusion: 1.0 },
            LevySymbolSpec::CompoundPoisson { rate: 2.0, jumps: JumpLaw::Unit },
            LevySymbolSpec::StableSubordinator { alpha: 0.7 },
            LevySymbolSpec::PoissonSymbol { lambda: 1.5 },
        ];
        for s in &specs {
            let v = levy_symbol_eval(s, 0.0);
            assert_abs_diff_eq!(v.norm(), 0.0, epsilon = 1e-14);
            let phi0 = compose_phi(s, 0.0, 1.0, 1.0);
            assert_abs_diff_eq!(phi0.norm(), 0.0, epsilon = 1e-14);
            let g0 = compose_g(s, 0.0, 1.0, 1.0, 0.8, 0.7);
            assert_abs_diff_eq!(g0.norm(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn nonnegative_real_part_on_grid() {
        let specs = [
            LevySymbolSpec::Brownian { drift: 0.5, diffusion: 2.0 },
            LevySymbolSpec::CompoundPoisson { rate: 1.0, jumps: JumpLaw::Gaussian { mean: 0.0, std: 1.0 } },
            LevySymbolSpec::CompoundPoisson { rate: 1.0, jumps: JumpLaw::Exponential { rate: 2.0 } },
            LevySymbolSpec::PoissonSymbol { lambda: 1.0 },
        ];
        for s in &specs {
            for i in -40..=40 {
                let xi = 0.25 * i as f64;
                assert!(levy_symbol_eval(s, xi).re >= -1e-12, "{s:?} at {xi}");
            }
        }
    }

    #[test]
    fn driftless_brownian_plugin() {
        // Ψ(ξ) = ξ²/2, a = λ = 1, ξ = 1: Φ = 0.5 + (1 - e^{-0.5})
        let s = LevySymbolSpec::Brownian { drift: 0.0, diffusion: 1.0 };
        let phi = compose_phi(&s, 1.0, 1.0, 1.0);
        assert_abs_diff_eq!(phi.re, 0.5 + 1.0 - (-0.5_f64).exp(), epsilon = 1e-14);
        assert_abs_diff_eq!(phi.im, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn unit_orders_reduce_g_to_phi() {
        let s = LevySymbolSpec::Brownian { drift: 0.3, diffusion: 1.0 };
        for &xi in &[0.5, 1.0, 2.0] {
            let g = compose_g(&s, xi, 1.3, 0.8, 1.0, 1.0);
            let phi = compose_phi(&s, xi, 1.3, 0.8);
            assert_abs_diff_eq!((g - phi).norm(), 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn stable_symbol_matches_laplace_exponent() {
        // on the negative imaginary axis the symbol gives the Laplace
        // exponent: Ψ evaluated via iξ ↦ real s gives s^α
        let s = LevySymbolSpec::StableSubordinator { alpha: 0.6 };
        let v = levy_symbol_eval(&s, 1.0);
        // (-i)^0.6 = e^{-iπ·0.3}
        assert_abs_diff_eq!(v.norm(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(v.arg(), -std::f64::consts::PI * 0.3, epsilon = 1e-14);
    }
}
