//! Laws of the drifted processes: Poisson plus deterministic drift, Poisson
//! plus subordinated drift, and the fully time-changed drifted process,
//! plus the waiting-time density of the time-changed Poisson process.

use std::sync::Arc;

use super::pmf::{pmf_auto, pmf_stf, space_frac_pmf, space_frac_pmf_row};
use super::{Atom, FracParams, MixedLaw};
use crate::error::{Error, Result};
use crate::fracops::poisson_row;
use crate::quad;
use crate::specfun::{inv_stable_density, stable_density, FracOrder};

/// Law of N(t) + at: Poisson atoms on the moving lattice {k + at}.
pub fn drifted_poisson_law(t: f64, lambda: f64, a: f64) -> Result<MixedLaw> {
    if t < 0.0 {
        return Err(Error::Domain(format!("time must be >= 0, got {t}")));
    }
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("lambda must be > 0, got {lambda}")));
    }
    if t == 0.0 {
        return MixedLaw::from_atoms(vec![Atom { location: 0.0, weight: 1.0 }]);
    }
    let (w, _) = poisson_row(lambda * t, 1e-12, 100_000);
    let atoms = w
        .into_iter()
        .enumerate()
        .map(|(k, weight)| Atom { location: k as f64 + a * t, weight })
        .collect();
    MixedLaw::from_atoms(atoms)
}

/// Density of N(t) + a𝔄_t^α at x, α ∈ (0,1), a > 0:
/// e^{-λt} Σ_{k<x} (λt)^k/k! · h_α(x-k, a^α t).
pub fn random_drift_density(x: f64, t: f64, alpha: f64, lambda: f64, a: f64) -> Result<f64> {
    if !(0.0 < alpha && alpha < 1.0) {
        return Err(Error::Domain(
            "random_drift_density needs alpha in (0,1); alpha = 1 is the lattice law".into(),
        ));
    }
    if !(a > 0.0) {
        return Err(Error::Domain("random_drift_density needs a > 0".into()));
    }
    if x <= 0.0 {
        return Ok(0.0);
    }
    let (w, _) = poisson_row(lambda * t, 1e-14, 100_000);
    let ta = a.powf(alpha) * t;
    let mut acc = 0.0;
    for (k, wk) in w.iter().enumerate() {
        let y = x - k as f64;
        if y <= 0.0 {
            break;
        }
        acc += wk * stable_density(alpha, y, ta)?;
    }
    Ok(acc)
}

/// Law of N(t) + a𝔄_t^α as a mixed law: pure atoms for a = 0, the moving
/// lattice for α = 1, a continuous density otherwise.
pub fn random_drift_law(t: f64, alpha: FracOrder, lambda: f64, a: f64) -> Result<MixedLaw> {
    if a == 0.0 {
        return drifted_poisson_law(t, lambda, 0.0);
    }
    if alpha.is_one() {
        return drifted_poisson_law(t, lambda, a);
    }
    let al = alpha.get();
    let density = Arc::new(move |x: f64| random_drift_density(x, t, al, lambda, a));
    Ok(MixedLaw { atoms: Vec::new(), density: Some(density), density_mass: 1.0 })
}

/// Density of N(𝔉^{γ,β}_t) + a𝔉^{α,β}_t at x > 0, for a > 0:
/// the mixture Σ_{k<x} ∫ q_k(s) h_α(x-k, a^α s) l_β(s,t) ds with
/// q_k(s) = P{N(𝔄^γ_s) = k}.
pub fn full_drift_density(x: f64, t: f64, p: &FracParams) -> Result<f64> {
    if !(p.a > 0.0) {
        return Err(Error::Domain("full_drift_density needs a > 0; use full_drift_law for atoms".into()));
    }
    if x <= 0.0 {
        return Ok(0.0);
    }
    let (al, be, ga) = (p.alpha.get(), p.beta.get(), p.gamma.get());
    let (lam, a) = (p.lambda, p.a);
    let aal = a.powf(al);
    let kmax = x.ceil() as usize;

    if p.beta.is_one() {
        // l_1(s, t) = δ(s - t)
        let mut acc = 0.0;
        for k in 0..kmax {
            let y = x - k as f64;
            if y <= 0.0 {
                break;
            }
            let q = space_frac_pmf(k, t, ga, lam)?;
            let h = drift_kernel(al, y, aal * t)?;
            acc += q * h;
        }
        return Ok(acc);
    }

    if p.alpha.is_one() {
        // h_1(y, a s) = δ(y - a s): the s-integral collapses at s = y/a
        let mut acc = 0.0;
        for k in 0..kmax {
            let y = x - k as f64;
            if y <= 0.0 {
                break;
            }
            let s = y / a;
            acc += space_frac_pmf(k, s, ga, lam)? * inv_stable_density(be, s, t)? / a;
        }
        return Ok(acc);
    }
    // one shared adaptive pass in s for every k: the inverse-stable factor
    // and the pmf row are the expensive pieces and depend on s only
    let dim = kmax;
    let tb = t.powf(be);
    let qs = quad::integrate_vec(
        |u, out| {
            out.fill(0.0);
            if u <= 0.0 || u >= 1.0 {
                return;
            }
            let s = tb * (1.0 - u) / u;
            let jac = tb / (u * u);
            let l = inv_stable_density(be, s, t).unwrap_or(f64::NAN);
            if l == 0.0 {
                return;
            }
            let row = match space_frac_pmf_row(dim - 1, s, ga, lam) {
                Ok(r) => r,
                Err(_) => {
                    out.fill(f64::NAN);
                    return;
                }
            };
            for (k, o) in out.iter_mut().enumerate() {
                let y = x - k as f64;
                if y <= 0.0 {
                    break;
                }
                let h = stable_density(al, y, aal * s).unwrap_or(f64::NAN);
                if h != 0.0 {
                    *o = row[k] * h * l * jac;
                }
            }
        },
        dim,
        0.0,
        1.0,
        1e-9,
    )?;
    Ok(qs.iter().map(|q| q.value).sum::<f64>().max(0.0))
}

/// Law of the fully time-changed drifted process as a mixed law: atoms with
/// the space-time pmf (γ as space order) when a = 0, continuous otherwise.
pub fn full_drift_law(t: f64, p: &FracParams) -> Result<MixedLaw> {
    if p.a == 0.0 {
        let pp = FracParams {
            alpha: p.gamma,
            beta: p.beta,
            gamma: p.gamma,
            lambda: p.lambda,
            a: 0.0,
            b: 0.0,
        };
        let mut atoms = Vec::new();
        let mut cum = 0.0;
        for k in 0..=200 {
            let w = pmf_stf(k, t, &pp)?;
            atoms.push(Atom { location: k as f64, weight: w });
            cum += w;
            if 1.0 - cum < 1e-9 {
                break;
            }
        }
        return MixedLaw::from_atoms(atoms);
    }
    let pc = *p;
    let density = Arc::new(move |x: f64| full_drift_density(x, t, &pc));
    Ok(MixedLaw { atoms: Vec::new(), density: Some(density), density_mass: 1.0 })
}

fn drift_kernel(alpha: f64, y: f64, scale_t: f64) -> Result<f64> {
    if alpha == 1.0 {
        // handled by the callers through the delta collapse
        return Err(Error::Domain("drift kernel is a point mass at alpha = 1".into()));
    }
    stable_density(alpha, y, scale_t)
}

/// Density of the k-th event time of N(𝔉^{α,β}): (βk/(αt)) p_k(t; α, β).
/// For α = β = 1 this is the Erlang(k, λ) density.
pub fn waiting_time_density(k: usize, t: f64, p: &FracParams) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("waiting time index starts at k = 1".into()));
    }
    if !(t > 0.0) {
        return Err(Error::Domain(format!("time must be > 0, got {t}")));
    }
    let (a, b) = (p.alpha.get(), p.beta.get());
    Ok(b * k as f64 / (a * t) * pmf_auto(k, t, p)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma::ln_gamma;
    use approx::assert_abs_diff_eq;

    #[test]
    fn drifted_atoms_on_moving_lattice() {
        let law = drifted_poisson_law(2.0, 1.0, 0.5).unwrap();
        // atoms at k + 1.0
        for (k, a) in law.atoms.iter().take(5).enumerate() {
            assert_abs_diff_eq!(a.location, k as f64 + 1.0, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(law.total_mass(), 1.0, epsilon = 1e-10);
        // t = 0: single atom at the origin
        let law0 = drifted_poisson_law(0.0, 1.0, 0.5).unwrap();
        assert_eq!(law0.atoms.len(), 1);
        assert_eq!(law0.atoms[0].location, 0.0);
    }

    #[test]
    fn drifted_law_laplace_transform() {
        // 𝔼 e^{-ξ(N(t)+at)} = exp(-ξat - λt(1-e^{-ξ}))
        let (t, lam, a) = (1.5, 1.2, 0.7);
        let law = drifted_poisson_law(t, lam, a).unwrap();
        for &xi in &[0.3, 1.0, 2.5] {
            let expect = (-xi * a * t - lam * t * (1.0 - (-xi as f64).exp())).exp();
            assert_abs_diff_eq!(law.laplace(xi, 0.0).unwrap(), expect, epsilon = 1e-10);
        }
    }

    #[test]
    fn random_drift_no_jump_limit() {
        // λt → 0 leaves h_α(x, a^α t)
        let v = random_drift_density(0.8, 1.0, 0.5, 1e-12, 1.0).unwrap();
        let h = stable_density(0.5, 0.8, 1.0).unwrap();
        assert_abs_diff_eq!(v, h, epsilon = 1e-9);
    }

    #[test]
    fn random_drift_normalizes() {
        let q = quad::integrate(
            |u| {
                if u <= 0.0 || u >= 1.0 {
                    return 0.0;
                }
                let x = (1.0 - u) / u;
                random_drift_density(x, 1.0, 0.5, 1.0, 1.0).unwrap() / (u * u)
            },
            0.0,
            1.0,
            1e-8,
        )
        .unwrap();
        assert_abs_diff_eq!(q.value, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn random_drift_laplace_termwise() {
        // 𝔼e^{-ξX} = Σ_k e^{-ξk} w_k e^{-a^α t ξ^α} for the subordinated drift
        let (t, lam, a, al) = (1.0, 1.0, 1.0, 0.5_f64);
        let xi = 0.9_f64;
        let q = quad::integrate(
            |u| {
                if u <= 0.0 || u >= 1.0 {
                    return 0.0;
                }
                let x = (1.0 - u) / u;
                (-xi * x).exp() * random_drift_density(x, t, al, lam, a).unwrap() / (u * u)
            },
            0.0,
            1.0,
            1e-9,
        )
        .unwrap();
        let (w, _) = poisson_row(lam * t, 1e-13, 1000);
        let expect: f64 = w
            .iter()
            .enumerate()
            .map(|(k, wk)| wk * (-(xi * k as f64)).exp())
            .sum::<f64>()
            * (-(a.powf(al) * t * xi.powf(al))).exp();
        assert_abs_diff_eq!(q.value, expect, epsilon = 1e-7);
    }

    #[test]
    fn full_drift_degenerate_outer_clock() {
        // β = γ = 1 reduces to the subordinated-drift density
        let p = FracParams::new(0.5, 1.0, 1.0, 1.0, 1.0, 0.0).unwrap();
        for &x in &[0.5, 1.5, 3.2] {
            let f = full_drift_density(x, 1.0, &p).unwrap();
            let r = random_drift_density(x, 1.0, 0.5, 1.0, 1.0).unwrap();
            assert_abs_diff_eq!(f, r, epsilon = 1e-10);
        }
    }

    #[test]
    fn full_drift_atoms_when_no_drift() {
        let p = FracParams::new(0.5, 0.8, 0.6, 1.0, 0.0, 0.0).unwrap();
        let law = full_drift_law(1.0, &p).unwrap();
        assert!(law.density.is_none());
        // weights are the space-time pmf with γ as the space order
        let pp = FracParams::new(0.6, 0.8, 0.6, 1.0, 0.0, 0.0).unwrap();
        for (k, atom) in law.atoms.iter().take(5).enumerate() {
            assert_abs_diff_eq!(atom.weight, pmf_stf(k, 1.0, &pp).unwrap(), epsilon = 1e-11);
        }
    }

    #[test]
    fn full_drift_double_laplace_identity() {
        // ∫ e^{-μt} 𝔼 e^{-ξ X_t} dt = μ^{β-1}/(μ^β + a^α ξ^α + λ^γ(1-e^{-ξ})^γ)
        // with the inner transform known as E_β(-t^β(a^α ξ^α + λ^γ(1-e^{-ξ})^γ)).
        use crate::specfun::mittag_leffler;
        let p = FracParams::new(0.6, 0.7, 0.8, 1.0, 1.0, 0.0).unwrap();
        let (al, be, ga) = (0.6_f64, 0.7_f64, 0.8_f64);
        let (xi, mu) = (1.0_f64, 1.0_f64);
        let c = p.a.powf(al) * xi.powf(al) + p.lambda.powf(ga) * (1.0 - (-xi).exp()).powf(ga);
        let q = quad::integrate(
            |u| {
                if u <= 0.0 || u >= 1.0 {
                    return 0.0;
                }
                let t = (1.0 - u) / u;
                (-mu * t).exp()
                    * mittag_leffler(be, 1.0, -t.powf(be) * c).unwrap().value
                    / (u * u)
            },
            0.0,
            1.0,
            1e-10,
        )
        .unwrap();
        let expect = mu.powf(be - 1.0) / (mu.powf(be) + c);
        assert_abs_diff_eq!(q.value, expect, epsilon = 1e-8);
    }

    #[test]
    fn full_drift_density_transform_matches_mixture() {
        // Laplace of the full density at one point against the closed form
        // E_β(-t^β(a^α ξ^α + λ^γ(1-e^{-ξ})^γ)); slow but decisive.
        use crate::specfun::mittag_leffler;
        let p = FracParams::new(0.6, 0.7, 0.8, 1.0, 1.0, 0.0).unwrap();
        let al = 0.6_f64;
        let xi = 1.0_f64;
        // [0,1] with x = v^{1/α} to absorb the x^{α-1} origin singularity,
        // then unit intervals up to 14 (the density has kinks at integers);
        // the neglected tail is below e^{-14}.
        let f = |x: f64| (-xi * x).exp() * full_drift_density(x, 1.0, &p).unwrap();
        let mut total = quad::integrate(
            |v| {
                if v <= 0.0 {
                    return 0.0;
                }
                let x = v.powf(1.0 / al);
                f(x) * x / (al * v)
            },
            0.0,
            1.0,
            1e-6,
        )
        .unwrap()
        .value;
        for j in 1..14 {
            total += quad::integrate(f, j as f64, j as f64 + 1.0, 1e-6).unwrap().value;
        }
        let c = p.a.powf(0.6) * xi.powf(0.6) + (1.0 - (-xi).exp()).powf(0.8);
        let expect = mittag_leffler(0.7, 1.0, -c).unwrap().value;
        assert_abs_diff_eq!(total, expect, epsilon = 1e-4);
    }

    #[test]
    fn waiting_time_erlang_reduction() {
        let p = FracParams::new(1.0, 1.0, 1.0, 1.0, 0.0, 0.0).unwrap();
        // k=1: λe^{-λt}
        assert_abs_diff_eq!(
            waiting_time_density(1, 0.7, &p).unwrap(),
            (-0.7_f64).exp(),
            epsilon = 1e-12
        );
        // k=3, t=2, λ=1: Erlang(3,1) density t²e^{-t}/2!
        let expect = 4.0 * (-2.0_f64).exp() / 2.0;
        assert_abs_diff_eq!(waiting_time_density(3, 2.0, &p).unwrap(), expect, epsilon = 1e-12);
        // general Erlang against the log-space formula
        let k = 5;
        let t = 3.3_f64;
        let e = ((k as f64 - 1.0) * t.ln() - t - ln_gamma(k as f64)).exp();
        assert_abs_diff_eq!(waiting_time_density(k, t, &p).unwrap(), e, epsilon = 1e-12);
    }

    #[test]
    fn waiting_time_normalizes() {
        // ∫₀^T density dt + P(T_k > T) = 1: truncated horizon plus the tail
        // through the pmf identity P(T_k > T) = Σ_{m<k} p_m(T).
        use crate::laws::pmf_auto;
        let p = FracParams::new(0.7, 0.8, 1.0, 1.0, 0.0, 0.0).unwrap();
        let k = 2;
        let horizon = 3.0;
        let q = quad::integrate(
            |t: f64| {
                if t <= 0.0 {
                    return 0.0;
                }
                waiting_time_density(k, t, &p).unwrap()
            },
            0.0,
            horizon,
            1e-8,
        )
        .unwrap();
        let tail: f64 = (0..k).map(|m| pmf_auto(m, horizon, &p).unwrap()).sum();
        assert_abs_diff_eq!(q.value + tail, 1.0, epsilon = 1e-4);
    }
}
