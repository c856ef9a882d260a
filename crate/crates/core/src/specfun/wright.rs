//! Wright function W_{ρ,ϱ}(z) = Σ z^k / (k! Γ(ρk + ϱ)) for ρ ∈ (-1, 0),
//! z ≤ 0, and the stable / inverse-stable densities written in it.
//!
//! The series loses all digits once |z| grows or ρ approaches -1 (terms peak
//! at astronomically large magnitudes before the factorial wins). For the
//! density case ϱ = 1 + ρ the Zolotarev integral of the unit stable law is
//! used instead: a positive integrand, so no cancellation at any argument.

use std::f64::consts::PI;

use super::gamma::{ln_gamma, ln_gamma_abs_sign, rgamma};
use super::{EvalResult, SeriesConfig};
use crate::error::{Error, Result};
use crate::quad;

/// W_{ρ,ϱ}(z) for ρ ∈ (-1, 0), z ≤ 0, with the default series config.
pub fn wright(rho: f64, varrho: f64, z: f64) -> Result<EvalResult> {
    wright_with(rho, varrho, z, &SeriesConfig::default())
}

pub fn wright_with(rho: f64, varrho: f64, z: f64, cfg: &SeriesConfig) -> Result<EvalResult> {
    if !(-1.0 < rho && rho < 0.0) {
        return Err(Error::Domain(format!("wright requires rho in (-1,0), got {rho}")));
    }
    if z > 0.0 {
        return Err(Error::Domain(format!("wright requires z <= 0, got {z}")));
    }
    if z == 0.0 {
        return Ok(EvalResult { value: rgamma(varrho), abs_error_estimate: f64::EPSILON, terms_used: 1 });
    }
    if let Some(res) = wright_series(rho, varrho, z, cfg) {
        return Ok(res);
    }
    // Density regime ϱ = 1 + ρ: W_{-ν,1-ν}(-x) is the inverse-stable density
    // l_ν(x, 1), reachable through the unit stable density.
    if (varrho - (1.0 + rho)).abs() < 1e-12 {
        let nu = -rho;
        let x = -z;
        let v = inv_stable_via_zolotarev(nu, x)?;
        return Ok(EvalResult { value: v, abs_error_estimate: 1e-10 * v.abs() + 1e-300, terms_used: 0 });
    }
    Err(Error::NonConvergent(format!(
        "wright({rho}, {varrho}, {z}): series not certifiable in f64 at this argument"
    )))
}

/// Certified Wright series; `None` when the rounding/tail bound fails.
fn wright_series(rho: f64, varrho: f64, z: f64, cfg: &SeriesConfig) -> Option<EvalResult> {
    let ln_az = z.abs().ln();
    let anu = -rho;
    let mut sum = 0.0_f64;
    let mut asum = 0.0_f64;
    let mut k = 0usize;
    let mut prev_env = f64::INFINITY;
    let mut tail = f64::INFINITY;
    let mut tiny_run = 0usize;
    while k < cfg.term_cap {
        let kf = k as f64;
        let (lg, sg) = ln_gamma_abs_sign(rho * kf + varrho);
        let ln_fact = ln_gamma(kf + 1.0);
        let ln_term = kf * ln_az - ln_fact - lg;
        if ln_term > 690.0 {
            return None;
        }
        let mag = ln_term.exp();
        if sg != 0.0 {
            let sign = if k % 2 == 1 && z < 0.0 { -sg } else { sg };
            sum += sign * mag;
        }
        asum += mag;
        // |sin| ≤ 1 envelope: |1/Γ(ρk+ϱ)| ≤ Γ(νk + 1 - ϱ)/π for νk+1-ϱ > 0.
        let env_arg = anu * kf + 1.0 - varrho;
        if env_arg > 1.0 {
            let env = (kf * ln_az - ln_fact + ln_gamma(env_arg) - PI.ln()).exp();
            if env < prev_env {
                let r = env / prev_env;
                if r < 0.5 {
                    tail = env * r / (1.0 - r);
                }
            }
            prev_env = env;
        }
        if mag < 1e-17 * asum.max(1e-300) && tail.is_finite() {
            tiny_run += 1;
            if tiny_run >= 3 {
                k += 1;
                break;
            }
        } else {
            tiny_run = 0;
        }
        k += 1;
    }
    let err = tail + 4.0 * f64::EPSILON * asum;
    if err <= (cfg.tol * sum.abs()).max(1e-300).max(cfg.tol * 1e-4) && sum.is_finite() {
        Some(EvalResult { value: sum, abs_error_estimate: err, terms_used: k })
    } else {
        None
    }
}

/// Zolotarev's function A(φ) in log space.
fn ln_zolotarev_a(alpha: f64, phi: f64) -> f64 {
    let om = 1.0 - alpha;
    (alpha / om) * (alpha * phi).sin().ln() + (om * phi).sin().ln() - (phi.sin().ln()) / om
}

/// Density of the unit one-sided stable law S_α (𝔼 e^{-ξ S} = e^{-ξ^α})
/// through the Zolotarev integral; valid for all x > 0.
pub fn unit_stable_pdf_zolotarev(alpha: f64, x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    let c = alpha / (1.0 - alpha);
    let xc = x.powf(-c);
    // Left tail: the minimal exponent already underflows, density is 0 in f64.
    let ln_a0 = c * alpha.ln() + (1.0 - alpha).ln();
    if xc * ln_a0.exp() > 720.0 {
        return Ok(0.0);
    }
    let f = |phi: f64| {
        if phi <= 0.0 || phi >= PI {
            return 0.0;
        }
        let la = ln_zolotarev_a(alpha, phi);
        if la > 700.0 {
            return 0.0;
        }
        let a = la.exp();
        let e = xc * a;
        if e > 700.0 {
            0.0
        } else {
            a * (-e).exp()
        }
    };
    let q = quad::integrate(f, 0.0, PI, 1e-13).map_err(|e| Error::Quadrature(format!("stable pdf: {e}")))?;
    Ok(c * x.powf(-1.0 / (1.0 - alpha)) / PI * q.value)
}

/// Unit stable density with automatic branch selection.
pub fn unit_stable_pdf(alpha: f64, x: f64) -> Result<f64> {
    if !(0.0 < alpha && alpha < 1.0) {
        return Err(Error::Domain(format!("unit stable density needs alpha in (0,1), got {alpha}")));
    }
    if x <= 0.0 {
        return Ok(0.0);
    }
    // g_α(x) = α x^{-1-α} W_{-α,1-α}(-x^{-α}); series viable for large x.
    let zarg = -x.powf(-alpha);
    if zarg >= -SERIES_TRY_LIMIT {
        if let Some(w) = wright_series(-alpha, 1.0 - alpha, zarg, &SeriesConfig::default()) {
            return Ok(alpha * x.powf(-1.0 - alpha) * w.value);
        }
    }
    unit_stable_pdf_zolotarev(alpha, x)
}

// Beyond this magnitude the series attempt is pointless for every α.
const SERIES_TRY_LIMIT: f64 = 80.0;

/// Density l_α(x, t) of the inverse α-stable subordinator,
/// l_α(x,t) = t^{-α} W_{-α,1-α}(-x t^{-α}).
pub fn inv_stable_density(alpha: f64, x: f64, t: f64) -> Result<f64> {
    check_order_strict(alpha)?;
    if t <= 0.0 {
        return Err(Error::Domain(format!("inv_stable_density requires t > 0, got {t}")));
    }
    if x < 0.0 {
        return Ok(0.0);
    }
    let ta = t.powf(-alpha);
    if x == 0.0 {
        return Ok(ta * rgamma(1.0 - alpha));
    }
    let z = -x * ta;
    if z >= -SERIES_TRY_LIMIT {
        if let Some(w) = wright_series(-alpha, 1.0 - alpha, z, &SeriesConfig::default()) {
            return Ok(ta * w.value);
        }
    }
    Ok(ta * inv_stable_via_zolotarev(alpha, x * ta)?)
}

/// l_ν(x, 1) through the unit stable density:
/// l_ν(x,1) = (1/ν) x^{-1-1/ν} g_ν(x^{-1/ν}).
fn inv_stable_via_zolotarev(nu: f64, x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    let g = unit_stable_pdf_zolotarev(nu, x.powf(-1.0 / nu))?;
    Ok(x.powf(-1.0 - 1.0 / nu) * g / nu)
}

/// Density h_α(x, t) of the stable subordinator 𝔄_t^α,
/// h_α(x,t) = (αt/x) l_α(t, x) = t^{-1/α} g_α(x t^{-1/α}).
pub fn stable_density(alpha: f64, x: f64, t: f64) -> Result<f64> {
    check_order_strict(alpha)?;
    if t <= 0.0 {
        return Err(Error::Domain(format!("stable_density requires t > 0, got {t}")));
    }
    if x <= 0.0 {
        // limit value for every α in (0,1)
        return Ok(0.0);
    }
    let s = t.powf(-1.0 / alpha);
    Ok(s * unit_stable_pdf(alpha, x * s)?)
}

fn check_order_strict(alpha: f64) -> Result<()> {
    if !(0.0 < alpha && alpha < 1.0) {
        return Err(Error::Domain(format!(
            "degenerate clock: order must lie in (0,1), got {alpha}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    // 40-digit series/Zolotarev references.
    const W_HALF: f64 = 0.439391289467722397046862; // W_{-1/2,1/2}(-1) = e^{-1/4}/√π
    const LEVY_11: f64 = 0.219695644733861198523431; // h_{1/2}(1,1)

    #[test]
    fn wright_single_term_at_zero() {
        let r = wright(-0.5, 0.5, 0.0).unwrap();
        assert_relative_eq!(r.value, 1.0 / PI.sqrt(), max_relative = 1e-13);
    }

    #[test]
    fn wright_half_reference() {
        let r = wright(-0.5, 0.5, -1.0).unwrap();
        assert_abs_diff_eq!(r.value, W_HALF, epsilon = 1e-12);
    }

    #[test]
    fn wright_deep_tail_underflows_to_zero() {
        // l_{0.9}(10,1): true value ~ exp(-3.9e8); must come back as 0, not junk.
        let r = wright(-0.9, 0.1, -10.0).unwrap();
        assert!(r.value.abs() < 1e-300, "got {}", r.value);
    }

    #[test]
    fn wright_poles_handled_inside_series() {
        // ρk+ϱ hits 0 and negative integers along the way; series must stay finite.
        let r = wright(-0.5, 1.0, -2.0).unwrap();
        assert!(r.value.is_finite());
    }

    #[test]
    fn inv_stable_half_closed_form() {
        // l_{1/2}(x,t) = e^{-x²/(4t)} / √(πt)
        for &x in &[0.0, 0.5, 1.0, 2.0, 5.0] {
            let v = inv_stable_density(0.5, x, 1.0).unwrap();
            assert_abs_diff_eq!(v, (-x * x / 4.0).exp() / PI.sqrt(), epsilon = 1e-10);
        }
        let v = inv_stable_density(0.5, 2.0, 1.0).unwrap();
        assert_abs_diff_eq!(v, (-1.0_f64).exp() / PI.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn stable_density_levy_closed_form() {
        // h_{1/2}(x,t) = t e^{-t²/(4x)} / (2√π x^{3/2})
        let v = stable_density(0.5, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(v, LEVY_11, epsilon = 1e-10);
        for &x in &[0.2, 0.7, 3.0, 10.0] {
            let v = stable_density(0.5, x, 1.0).unwrap();
            let exact = (-1.0 / (4.0 * x)).exp() / (2.0 * PI.sqrt() * x.powf(1.5));
            assert_relative_eq!(v, exact, max_relative = 1e-9);
        }
    }

    #[test]
    fn stable_density_vanishes_at_origin() {
        assert_eq!(stable_density(0.5, 0.0, 1.0).unwrap(), 0.0);
        assert!(stable_density(0.5, 1e-4, 1.0).unwrap() < 1e-200);
    }

    #[test]
    fn degenerate_order_rejected() {
        assert!(inv_stable_density(1.0, 1.0, 1.0).is_err());
        assert!(stable_density(1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn series_and_zolotarev_agree_mid_range() {
        for &al in &[0.4, 0.6, 0.7, 0.8] {
            for &x in &[0.8, 1.5, 3.0] {
                let z = unit_stable_pdf_zolotarev(al, x).unwrap();
                let s = unit_stable_pdf(al, x).unwrap();
                assert_abs_diff_eq!(z, s, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn densities_normalize() {
        for &al in &[0.5, 0.7] {
            let q = quad::integrate_to_inf(|x| inv_stable_density(al, x, 1.0).unwrap(), 0.0, 1e-9).unwrap();
            assert_abs_diff_eq!(q.value, 1.0, epsilon = 1e-6);
            let q = quad::integrate_to_inf(|x| stable_density(al, x, 1.0).unwrap(), 0.0, 1e-9).unwrap();
            assert_abs_diff_eq!(q.value, 1.0, epsilon = 1e-6);
        }
    }
}
