//! Transform and boundary data of the hitting time of the drifted
//! jump process N(𝔄^γ) + b𝔄^β.

use crate::error::{Error, Result};
use crate::fracops::frac_binomial_coeffs;
use crate::specfun::FracOrder;

/// Laplace transform in t of the hitting-time density at level x:
/// ξ^{-1}[b^β ξ^β + λ^γ(1-e^{-ξ})^γ] exp(-b^β ξ^β x - λ^γ x (1-e^{-ξ})^γ).
pub fn hitting_transform(x: f64, xi: f64, beta: FracOrder, gamma: FracOrder, b: f64, lambda: f64) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::Domain(format!("level must be >= 0, got {x}")));
    }
    if !(xi > 0.0) {
        return Err(Error::Domain(format!("transform argument must be > 0, got {xi}")));
    }
    let (be, ga) = (beta.get(), gamma.get());
    let jb = b.powf(be) * xi.powf(be);
    let jp = lambda.powf(ga) * (1.0 - (-xi).exp()).powf(ga);
    Ok((jb + jp) / xi * (-(jb + jp) * x).exp())
}

/// Boundary profile u(0, t) of the hitting-time equation: the binomial
/// Heaviside staircase λ^γ Σ_{k <= t} (-1)^k C(γ,k); for γ = 1 this is
/// λ[H(t) - H(t-1)].
pub fn hitting_boundary_u0(t: f64, gamma: FracOrder, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("lambda must be > 0, got {lambda}")));
    }
    if t < 0.0 {
        return Ok(0.0);
    }
    let g = gamma.get();
    if gamma.is_one() {
        return Ok(if t < 1.0 { lambda } else { 0.0 });
    }
    let kmax = t.floor() as usize;
    let w = frac_binomial_coeffs(g, kmax + 1);
    Ok(lambda.powf(g) * w.iter().sum::<f64>())
}
