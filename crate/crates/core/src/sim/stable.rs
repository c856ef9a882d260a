//! One-sided stable draws (Kanter construction) and a guarded Poisson draw.

use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use std::f64::consts::PI;

#[inline]
fn open01<R: Rng>(rng: &mut R) -> f64 {
    rng.gen_range(1e-12..(1.0 - 1e-12))
}

/// One draw of S with 𝔼 e^{-ξS} = e^{-ξ^α}, α ∈ (0,1):
/// S = sin(αU)/sin(U)^{1/α} · (sin((1-α)U)/E)^{(1-α)/α},
/// U uniform on (0,π), E unit exponential.
pub fn sample_unit_stable<R: Rng>(alpha: f64, rng: &mut R) -> f64 {
    debug_assert!(0.0 < alpha && alpha < 1.0);
    let u = open01(rng) * PI;
    let e: f64 = -open01(rng).ln();
    let s1 = (alpha * u).sin() / u.sin().powf(1.0 / alpha);
    let s2 = (((1.0 - alpha) * u).sin() / e).powf((1.0 - alpha) / alpha);
    s1 * s2
}

/// Poisson(μ) count as f64; for extreme means (heavy-tailed random clocks)
/// the exact sampler is replaced by its normal limit.
pub fn sample_poisson_count<R: Rng>(mu: f64, rng: &mut R) -> f64 {
    if mu <= 0.0 {
        return 0.0;
    }
    if mu > 1e12 {
        let z: f64 = StandardNormal.sample(rng);
        return (mu + mu.sqrt() * z).round().max(0.0);
    }
    Poisson::new(mu).expect("positive mean").sample(rng)
}
