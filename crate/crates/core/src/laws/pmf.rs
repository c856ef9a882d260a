//! Probability mass functions of the time-changed Poisson family.
//!
//! The closed series route is
//!   p_k(t; α, β) = ((-1)^k / k!) Σ_r (-λ^α t^β)^r Γ(αr+1)
//!                  / (Γ(βr+1) Γ(αr+1-k)),
//! equivalent to ((-λ∂_λ)^k/k!) E_β(-t^β λ^α) with the translation-operator
//! convention λ^k(-∂_λ)^k. The quadrature route integrates the Poisson pmf
//! against the clock density and serves as the independent cross-check.

use super::clock::clock_density;
use super::FracParams;
use crate::error::{Error, Result};
use crate::fracops::{falling, poisson_tail_above, PsiSpec};
use crate::quad;
use crate::specfun::gamma::{gamma_reg_lower, ln_gamma, ln_gamma_abs_sign};
use crate::specfun::{mittag_leffler, FracOrder};

/// p_k(t; α, β): probability of k events for the Poisson process on the
/// composed clock, space order `p.alpha`, time order `p.beta`.
///
/// Series route with an algebraic large-argument branch: once
/// x = λ^α t^β leaves the series range the expansion of E_β down the
/// negative axis is differentiated term by term instead.
pub fn pmf_stf(k: usize, t: f64, p: &FracParams) -> Result<f64> {
    let (a, b) = (p.alpha.get(), p.beta.get());
    let x = p.lambda.powf(a) * t.powf(b);
    let series = StfSeries::new(a, b, p.lambda, t, k).and_then(|s| s.pmf(k));
    match series {
        Ok(v) => Ok(v),
        Err(e) => {
            if x > 20.0 && b < 1.0 {
                pmf_stf_asymptotic(k, x, a, b)
            } else {
                Err(e)
            }
        }
    }
}

/// Robust evaluator: the series first, the quadrature route when the
/// series refuses mid-range arguments, the algebraic branch far out.
pub fn pmf_auto(k: usize, t: f64, p: &FracParams) -> Result<f64> {
    match pmf_stf(k, t, p) {
        Ok(v) => Ok(v),
        Err(first) => match pmf_quadrature(k, t, p) {
            Ok(v) => Ok(v),
            Err(_) => Err(first),
        },
    }
}

/// Large-argument branch: λ-derivatives of the algebraic expansion
/// E_β(-y) ≈ Σ_{n=1}^4 (-1)^{n+1} y^{-n}/Γ(1-nβ), y = t^β λ^α, giving
/// p_k ≈ ((-1)^k/k!) Σ_n (-1)^{n+1} x^{-n} (−nα)_k↓ / Γ(1-nβ).
fn pmf_stf_asymptotic(k: usize, x: f64, alpha: f64, beta: f64) -> Result<f64> {
    let ln_kfact = ln_gamma(k as f64 + 1.0);
    let mut sum = 0.0;
    let mut last = 0.0;
    for n in 1..=4 {
        let nf = n as f64;
        let sign = if (n + 1 + k) % 2 == 1 { -1.0 } else { 1.0 };
        let term = sign
            * x.powi(-(n as i32))
            * falling(-nf * alpha, k)
            * crate::specfun::gamma::rgamma(1.0 - nf * beta)
            * (-ln_kfact).exp();
        sum += term;
        last = term.abs();
    }
    let next = x.powi(-5)
        * falling(-5.0 * alpha, k).abs()
        * crate::specfun::gamma::rgamma(1.0 - 5.0 * beta).abs().max(0.5)
        * (-ln_kfact).exp();
    let err = next + 1e-14 * last;
    if err > 1e-6 * sum.abs().max(1e-12) {
        return Err(Error::NonConvergent(format!(
            "pmf asymptotic branch error bound {err:.3e} too large at x = {x}, k = {k}"
        )));
    }
    Ok(sum.max(0.0))
}

/// The row p_0..p_kmax sharing the series precomputation.
pub fn pmf_stf_row(kmax: usize, t: f64, p: &FracParams) -> Result<Vec<f64>> {
    let s = StfSeries::new(p.alpha.get(), p.beta.get(), p.lambda, t, kmax)?;
    (0..=kmax).map(|k| s.pmf(k)).collect()
}

/// P{N(𝔄_u^α) = k}: the pure jump-order pmf (β = 1).
///
/// Series route; falls back to the Bell-polynomial form for small k (exact
/// but cancellation-bound) and to the positive Poisson-against-stable
/// quadrature for the rest.
pub fn space_frac_pmf(k: usize, u: f64, alpha: f64, lambda: f64) -> Result<f64> {
    if u == 0.0 {
        return Ok(if k == 0 { 1.0 } else { 0.0 });
    }
    let series = StfSeries::with_argument(alpha, 1.0, lambda.powf(alpha) * u, k).and_then(|s| s.pmf(k));
    match series {
        Ok(v) => Ok(v),
        Err(_) if k <= BELL_K_LIMIT => space_frac_pmf_bell(k, u, alpha, lambda),
        Err(_) => space_frac_pmf_quad(k, u, alpha, lambda),
    }
}

/// The whole row q_0..q_kmax at clock value u, sharing the series state.
pub fn space_frac_pmf_row(kmax: usize, u: f64, alpha: f64, lambda: f64) -> Result<Vec<f64>> {
    if u == 0.0 {
        let mut row = vec![0.0; kmax + 1];
        row[0] = 1.0;
        return Ok(row);
    }
    let series = StfSeries::with_argument(alpha, 1.0, lambda.powf(alpha) * u, kmax);
    let mut row = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        let v = match &series {
            Ok(s) => s.pmf(k),
            Err(_) => Err(Error::NonConvergent("series state unavailable".into())),
        };
        let v = match v {
            Ok(v) => v,
            Err(_) if k <= BELL_K_LIMIT => space_frac_pmf_bell(k, u, alpha, lambda)?,
            Err(_) => space_frac_pmf_quad(k, u, alpha, lambda)?,
        };
        row.push(v);
    }
    Ok(row)
}

/// Beyond this index the alternating Bell recurrence loses too many digits.
const BELL_K_LIMIT: usize = 15;

/// q_k(u) = ∫ Pois_k(λw) h_α(w, u) dw: positive integrand, any argument.
fn space_frac_pmf_quad(k: usize, u: f64, alpha: f64, lambda: f64) -> Result<f64> {
    use crate::specfun::stable_density;
    let ln_kfact = ln_gamma(k as f64 + 1.0);
    let pois = |w: f64| {
        if w <= 0.0 {
            return 0.0;
        }
        let lv = k as f64 * (lambda * w).ln() - lambda * w - ln_kfact;
        if lv < -700.0 {
            0.0
        } else {
            lv.exp()
        }
    };
    // mass scales: the Poisson factor peaks at w ~ k/λ, the density at w ~ u^{1/α}
    let scale = (k as f64 / lambda).max(u.powf(1.0 / alpha)).max(1e-6);
    let f = |w: f64| {
        let p = pois(w);
        if p == 0.0 {
            return 0.0;
        }
        p * stable_density(alpha, w, u).unwrap_or(f64::NAN)
    };
    let head = quad::integrate(|v| f(scale * v) * scale, 0.0, 1.0, 1e-12)?;
    let tail = quad::integrate(
        |v| {
            if v <= 0.0 {
                return 0.0;
            }
            let w = scale / v;
            f(w) * scale / (v * v)
        },
        0.0,
        1.0,
        1e-12,
    )?;
    Ok((head.value + tail.value).max(0.0))
}

/// Same pmf through ∂^k_λ e^{-uλ^α} via the complete Bell polynomial:
/// e^{-uλ^α} times a degree-k polynomial in u, no series truncation.
pub fn space_frac_pmf_bell(k: usize, u: f64, alpha: f64, lambda: f64) -> Result<f64> {
    if !(0.0 < alpha && alpha <= 1.0) {
        return Err(Error::Domain(format!("alpha must lie in (0,1], got {alpha}")));
    }
    if u < 0.0 {
        return Err(Error::Domain(format!("clock value must be >= 0, got {u}")));
    }
    if u == 0.0 {
        return Ok(if k == 0 { 1.0 } else { 0.0 });
    }
    // w_j = d^j/dλ^j (-u λ^α), rescaled by s^{-j} to keep the Bell
    // recurrence inside the f64 range for large u
    let scale = (u * alpha * lambda.powf(alpha - 1.0)).max(1.0);
    let mut w = vec![0.0; k + 1];
    for j in 1..=k {
        w[j] = -u * falling(alpha, j) * lambda.powf(alpha - j as f64) / scale.powi(j as i32);
    }
    let mut bell = vec![0.0; k + 1];
    bell[0] = 1.0;
    for n in 1..=k {
        let mut acc = 0.0;
        let mut binom = 1.0; // C(n-1, i-1)
        for i in 1..=n {
            acc += binom * w[i] * bell[n - i];
            binom *= (n - i) as f64 / i as f64;
        }
        bell[n] = acc;
    }
    if bell[k] == 0.0 {
        return Ok(0.0);
    }
    let ln_pref = k as f64 * lambda.ln() + k as f64 * scale.ln() - u * lambda.powf(alpha)
        - ln_gamma(k as f64 + 1.0)
        + bell[k].abs().ln();
    if ln_pref < -745.0 {
        return Ok(0.0);
    }
    let sign = if k % 2 == 1 { -1.0 } else { 1.0 } * bell[k].signum();
    let v = sign * ln_pref.exp();
    if !v.is_finite() {
        return Err(Error::NonConvergent(format!("Bell route overflowed at k={k}, u={u}")));
    }
    Ok(v.max(0.0))
}

/// Shared series evaluator for all k up to a bound.
struct StfSeries {
    alpha: f64,
    /// r ln x + lnΓ(αr+1) - lnΓ(βr+1), precomputed per r
    base: Vec<f64>,
}

impl StfSeries {
    fn new(alpha: f64, beta: f64, lambda: f64, t: f64, kmax: usize) -> Result<Self> {
        if !(t > 0.0) {
            return Err(Error::Domain(format!("time must be > 0, got {t}")));
        }
        Self::with_argument(alpha, beta, lambda.powf(alpha) * t.powf(beta), kmax)
    }

    fn with_argument(alpha: f64, beta: f64, x: f64, kmax: usize) -> Result<Self> {
        // series length: past the last Γ pole for the largest k, plus decay room
        let rmax = ((kmax as f64 / alpha) as usize + 220).max(280);
        let lx = x.ln();
        let mut base = Vec::with_capacity(rmax);
        for r in 0..rmax {
            let rf = r as f64;
            let v = rf * lx + ln_gamma(alpha * rf + 1.0) - ln_gamma(beta * rf + 1.0);
            if v > 650.0 {
                return Err(Error::NonConvergent(format!(
                    "pmf series argument x = {x} beyond the f64 range at r = {r}; use the quadrature route"
                )));
            }
            base.push(v);
        }
        Ok(StfSeries { alpha, base })
    }

    fn pmf(&self, k: usize) -> Result<f64> {
        let ln_kfact = ln_gamma(k as f64 + 1.0);
        let mut sum = 0.0_f64;
        let mut asum = 0.0_f64;
        let mut tail = f64::INFINITY;
        let mut prev_mag = f64::INFINITY;
        let pole_region_end = (k as f64 / self.alpha).ceil() as usize + 2;
        let mut tiny_run = 0;
        for (r, &b) in self.base.iter().enumerate() {
            let (lg, sg) = ln_gamma_abs_sign(self.alpha * r as f64 + 1.0 - k as f64);
            let ln_term = b - lg - ln_kfact;
            let mag = if sg == 0.0 { 0.0 } else { ln_term.exp() };
            let sign = if (r + k) % 2 == 1 { -sg } else { sg };
            sum += sign * mag;
            asum += mag;
            if r > pole_region_end {
                if mag == 0.0 {
                    // past the pole region the terms decay monotonically in
                    // envelope; an underflowed term bounds the whole tail
                    tail = tail.min(1e-290);
                    tiny_run += 1;
                    if tiny_run >= 3 {
                        break;
                    }
                    continue;
                }
                if mag < prev_mag {
                    let ratio = mag / prev_mag;
                    if ratio < 0.5 {
                        tail = mag * ratio / (1.0 - ratio);
                    }
                }
                prev_mag = mag;
                if mag < 1e-17 * asum.max(1e-300) && tail.is_finite() {
                    tiny_run += 1;
                    if tiny_run >= 3 {
                        break;
                    }
                } else {
                    tiny_run = 0;
                }
            }
        }
        let err = tail + 4.0 * f64::EPSILON * asum;
        if !tail.is_finite() || err > 1e-10_f64.max(1e-9 * sum.abs()) {
            return Err(Error::NonConvergent(format!(
                "pmf series for k = {k} did not certify (err bound {err:.3e})"
            )));
        }
        if sum < -err {
            return Err(Error::NonConvergent(format!("pmf series for k = {k} went negative: {sum}")));
        }
        Ok(sum.max(0.0))
    }
}

/// Probability generating function 𝔼 u^N = E_β(-t^β λ^α (1-u)^α).
pub fn pgf_stf(u: f64, t: f64, p: &FracParams) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::Domain(format!("pgf argument must lie in [0,1], got {u}")));
    }
    let (a, b) = (p.alpha.get(), p.beta.get());
    Ok(mittag_leffler(b, 1.0, -t.powf(b) * p.lambda.powf(a) * (1.0 - u).powf(a))?.value)
}

/// p_k(t; α, β) by quadrature of the Poisson pmf against the clock density.
pub fn pmf_quadrature(k: usize, t: f64, p: &FracParams) -> Result<f64> {
    Ok(pmf_quadrature_row(k, t, p)?[k])
}

/// The whole row p_0..p_kmax in one adaptive pass: the clock density is the
/// expensive factor and is shared across k.
pub fn pmf_quadrature_row(kmax: usize, t: f64, p: &FracParams) -> Result<Vec<f64>> {
    let lam = p.lambda;
    let dim = kmax + 1;
    let slot = |s: f64, out: &mut [f64], dens: f64| {
        // Poisson row times the density value
        let mu = lam * s;
        let mut w = (-mu).exp();
        for (k, o) in out.iter_mut().enumerate() {
            *o = w * dens;
            w *= mu / (k as f64 + 1.0);
        }
    };
    if p.alpha.is_one() && p.beta.is_one() {
        // both clocks degenerate: plain Poisson
        let mut out = vec![0.0; dim];
        slot(t, &mut out, 1.0);
        return Ok(out);
    }
    let qs = quad::integrate_vec(
        |u, out| {
            // map (0,1) -> (0,∞)
            let s = (1.0 - u) / u;
            let dens = clock_density(s, t, p.alpha, p.beta).unwrap_or(f64::NAN);
            slot(s, out, dens / (u * u));
        },
        dim,
        0.0,
        1.0,
        1e-9,
    )?;
    Ok(qs.into_iter().map(|q| q.value.max(0.0)).collect())
}

/// P{N > kmax} by quadrature: the regularized incomplete gamma of the
/// Poisson tail integrated against the clock density. Independent of the
/// series route, used for truncation-mass accounting.
pub fn pmf_tail_quadrature(kmax: usize, t: f64, p: &FracParams) -> Result<f64> {
    if p.alpha.is_one() && p.beta.is_one() {
        return Ok(poisson_tail_above(kmax, p.lambda * t));
    }
    let lam = p.lambda;
    let q = quad::integrate(
        |u| {
            let s = (1.0 - u) / u;
            let dens = clock_density(s, t, p.alpha, p.beta).unwrap_or(f64::NAN);
            gamma_reg_lower(kmax as f64 + 1.0, lam * s) * dens / (u * u)
        },
        0.0,
        1.0,
        1e-9,
    )?;
    Ok(q.value.clamp(0.0, 1.0))
}

/// p^ψ_k(t; β) = ((-λ∂_λ)^k/k!) E_β(-t^β ψ(λ)): the general-subordinator
/// pmf, with the λ-derivatives expanded by Faà di Bruno over the analytic
/// ψ catalog.
pub fn pmf_general_sub(k: usize, t: f64, beta: FracOrder, psi: &PsiSpec, lambda: f64) -> Result<f64> {
    psi.validate()?;
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("lambda must be > 0, got {lambda}")));
    }
    if !(t > 0.0) {
        return Err(Error::Domain(format!("time must be > 0, got {t}")));
    }
    let b = beta.get();
    let y = psi.deriv(lambda, 0);
    let tb = t.powf(b);
    // F^{(m)}(y) with F = E_β(-t^β ·): (-t^β)^m E_β^{(m)}(-t^β y)
    let mut fm = vec![0.0; k + 1];
    for (m, f) in fm.iter_mut().enumerate() {
        let d = ml_derivative(b, -tb * y, m)?;
        *f = d * (-tb).powi(m as i32);
    }
    if k == 0 {
        return Ok(fm[0]);
    }
    // partial Bell polynomials B_{n,m}(ψ', ψ'', ...)
    let mut x = vec![0.0; k + 1];
    for (j, xj) in x.iter_mut().enumerate().skip(1) {
        *xj = psi.deriv(lambda, j);
    }
    let mut bell = vec![vec![0.0; k + 1]; k + 1];
    bell[0][0] = 1.0;
    for n in 1..=k {
        for m in 1..=n {
            let mut acc = 0.0;
            let mut binom = 1.0; // C(n-1, i-1)
            for i in 1..=(n - m + 1) {
                acc += binom * x[i] * bell[n - i][m - 1];
                binom *= (n - i) as f64 / i as f64;
            }
            bell[n][m] = acc;
        }
    }
    let mut dk = 0.0;
    for m in 1..=k {
        dk += fm[m] * bell[k][m];
    }
    let ln_kfact = ln_gamma(k as f64 + 1.0);
    let sign = if k % 2 == 1 { -1.0 } else { 1.0 };
    let v = sign * (lambda.ln() * k as f64 - ln_kfact).exp() * dk;
    if v < -1e-10 {
        return Err(Error::NonConvergent(format!("general-subordinator pmf went negative: {v}")));
    }
    Ok(v.max(0.0))
}

/// m-th derivative of E_β at z ≤ 0:
/// E_β^{(m)}(z) = Σ_j ((j+m)!/j!) z^j / Γ(β(j+m)+1).
fn ml_derivative(beta: f64, z: f64, m: usize) -> Result<f64> {
    if m == 0 {
        return Ok(mittag_leffler(beta, 1.0, z)?.value);
    }
    if beta == 1.0 {
        return Ok(z.exp());
    }
    let lz = if z == 0.0 { f64::NEG_INFINITY } else { z.abs().ln() };
    let mf = m as f64;
    let mut sum = 0.0_f64;
    let mut asum = 0.0_f64;
    let mut prev = f64::INFINITY;
    for j in 0..10_000 {
        let jf = j as f64;
        let ln_term = ln_gamma(jf + mf + 1.0) - ln_gamma(jf + 1.0) + jf * lz
            - ln_gamma(beta * (jf + mf) + 1.0);
        let mag = if j == 0 && z == 0.0 {
            (ln_gamma(mf + 1.0) - ln_gamma(beta * mf + 1.0)).exp()
        } else if z == 0.0 {
            0.0
        } else {
            ln_term.exp()
        };
        let sign = if j % 2 == 1 && z < 0.0 { -1.0 } else { 1.0 };
        sum += sign * mag;
        asum += mag;
        if j > 3 && mag < prev && mag < 1e-17 * asum.max(1e-300) {
            let err = 4.0 * f64::EPSILON * asum + mag;
            if err > 1e-9 * sum.abs().max(1e-4) {
                return Err(Error::NonConvergent(format!(
                    "Mittag-Leffler derivative series (m = {m}) lost {err:.2e} to cancellation"
                )));
            }
            return Ok(sum);
        }
        prev = mag;
    }
    Err(Error::NonConvergent(format!("Mittag-Leffler derivative series (m = {m}) hit the term cap")))
}
