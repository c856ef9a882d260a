//! Law of the composed clock: the stable subordinator run on an inverse
//! stable subordinator.

use crate::error::{Error, Result};
use crate::quad;
use crate::specfun::{inv_stable_density, mittag_leffler, stable_density, FracOrder};

/// Laplace transform 𝔼 e^{-ξ 𝔉_t} = E_β(-t^β ξ^α).
pub fn clock_laplace(xi: f64, t: f64, alpha: FracOrder, beta: FracOrder) -> Result<f64> {
    if xi < 0.0 {
        return Err(Error::Domain(format!("laplace argument must be >= 0, got {xi}")));
    }
    if !(t > 0.0) {
        return Err(Error::Domain(format!("time must be > 0, got {t}")));
    }
    let (a, b) = (alpha.get(), beta.get());
    Ok(mittag_leffler(b, 1.0, -t.powf(b) * xi.powf(a)).unwrap_or_else(|_| {
        // far in the tail the asymptotic branch applies
        let (v, _) = crate::specfun::ml_asymptotic(b, 1.0, -t.powf(b) * xi.powf(a), 4);
        crate::specfun::EvalResult { value: v, abs_error_estimate: f64::NAN, terms_used: 0 }
    })
    .value)
}

/// Density f_t(x) of the composed clock: the s-mixture of the stable
/// density h_α(x, s) against the inverse-stable density l_β(s, t).
/// Degenerate orders collapse to the plain stable / inverse-stable laws.
pub fn clock_density(x: f64, t: f64, alpha: FracOrder, beta: FracOrder) -> Result<f64> {
    if x < 0.0 {
        return Ok(0.0);
    }
    if !(t > 0.0) {
        return Err(Error::Domain(format!("time must be > 0, got {t}")));
    }
    let (a, b) = (alpha.get(), beta.get());
    if alpha.is_one() && beta.is_one() {
        return Err(Error::Domain(
            "both orders are 1: the clock is deterministic, no density exists".into(),
        ));
    }
    if beta.is_one() {
        return stable_density(a, x, t);
    }
    if alpha.is_one() {
        return inv_stable_density(b, x, t);
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    // The integrand concentrates near s ~ min(x^α, t^β): take that as the
    // reference scale so adaptive subdivision sees the mass at O(1).
    let scale = x.powf(a).min(t.powf(b));
    let integrand = |s: f64| {
        if s <= 0.0 {
            return 0.0;
        }
        let h = stable_density(a, x, s).unwrap_or(f64::NAN);
        if h == 0.0 {
            return 0.0;
        }
        let l = inv_stable_density(b, s, t).unwrap_or(f64::NAN);
        h * l
    };
    let head = quad::integrate(|v| integrand(scale * v) * scale, 0.0, 1.0, 1e-11)?;
    let tail = quad::integrate(
        |u| {
            if u <= 0.0 {
                return 0.0;
            }
            let s = scale / u;
            integrand(s) * scale / (u * u)
        },
        0.0,
        1.0,
        1e-11,
    )?;
    Ok((head.value + tail.value).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ord(v: f64) -> FracOrder {
        FracOrder::new(v).unwrap()
    }

    #[test]
    fn laplace_basics() {
        assert_abs_diff_eq!(clock_laplace(0.0, 1.0, ord(0.7), ord(0.8)).unwrap(), 1.0, epsilon = 1e-12);
        // identity clock
        assert_abs_diff_eq!(
            clock_laplace(1.3, 2.0, ord(1.0), ord(1.0)).unwrap(),
            (-1.3 * 2.0_f64).exp(),
            epsilon = 1e-12
        );
        // (0.5, 0.5) at ξ = t = 1 is E_{1/2}(-1)
        assert_abs_diff_eq!(
            clock_laplace(1.0, 1.0, ord(0.5), ord(0.5)).unwrap(),
            0.4275835761558070044107503,
            epsilon = 1e-11
        );
    }

    #[test]
    fn scaling_symmetry_in_transform() {
        // α t ∂_t = β ξ ∂_ξ by finite differences on a (t, ξ) grid
        let (a, b) = (0.5_f64, 0.5_f64);
        let f = |xi: f64, t: f64| clock_laplace(xi, t, ord(a), ord(b)).unwrap();
        let h = 1e-4;
        for &t in &[0.5, 1.0, 2.0] {
            for &xi in &[0.5, 1.0, 2.0] {
                let dt = (f(xi, t + h) - f(xi, t - h)) / (2.0 * h);
                let dxi = (f(xi + h, t) - f(xi - h, t)) / (2.0 * h);
                assert_abs_diff_eq!(a * t * dt, b * xi * dxi, epsilon = 1e-5);
            }
        }
    }

    #[test]
    fn density_degenerate_reductions() {
        // β = 1: stable density
        let v = clock_density(1.0, 1.0, ord(0.5), ord(1.0)).unwrap();
        assert_abs_diff_eq!(v, 0.219695644733861198523431, epsilon = 1e-10);
        // α = 1: inverse-stable density
        let v = clock_density(1.0, 1.0, ord(1.0), ord(0.5)).unwrap();
        assert_abs_diff_eq!(
            v,
            (-0.25_f64).exp() / std::f64::consts::PI.sqrt(),
            epsilon = 1e-10
        );
    }

    /// ∫₀^∞ w(x) f_t(x) dx handling the x^{α-1} origin singularity by the
    /// substitution x = v^{1/α} on [0,1].
    fn integrate_against_density(a: f64, b: f64, w: impl Fn(f64) -> f64) -> f64 {
        let head = quad::integrate(
            |v| {
                if v <= 0.0 {
                    return 0.0;
                }
                let x = v.powf(1.0 / a);
                w(x) * clock_density(x, 1.0, ord(a), ord(b)).unwrap() * x / (a * v)
            },
            0.0,
            1.0,
            1e-8,
        )
        .unwrap();
        let tail = quad::integrate(
            |u| {
                if u <= 0.0 || u >= 1.0 {
                    return 0.0;
                }
                let x = 1.0 + (1.0 - u) / u;
                w(x) * clock_density(x, 1.0, ord(a), ord(b)).unwrap() / (u * u)
            },
            0.0,
            1.0,
            1e-8,
        )
        .unwrap();
        head.value + tail.value
    }

    #[test]
    fn density_laplace_matches_transform() {
        // ∫ e^{-ξx} f_t(x) dx = E_β(-t^β ξ^α) within 1e-5
        for &(a, b) in &[(0.5_f64, 0.5_f64), (0.7, 0.8)] {
            for &xi in &[0.5_f64, 1.0, 2.0] {
                let got = integrate_against_density(a, b, |x| (-xi * x).exp());
                let e = clock_laplace(xi, 1.0, ord(a), ord(b)).unwrap();
                assert_abs_diff_eq!(got, e, epsilon = 1e-5);
            }
        }
    }

    #[test]
    fn density_is_normalized() {
        let got = integrate_against_density(0.7, 0.8, |_| 1.0);
        assert_abs_diff_eq!(got, 1.0, epsilon = 1e-5);
    }
}
