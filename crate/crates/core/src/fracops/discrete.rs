//! Lattice-side operators: the fractional difference (I-B)^γ, the unit
//! shift K, the drifted Poisson transition semigroup, and ψ(λ(I-B)) for the
//! Bernstein-function catalog.

use super::SampledFn;
use crate::error::{Error, Result};
use crate::specfun::gamma::{gamma_reg_lower, rgamma};
use crate::specfun::FracOrder;
use serde::{Deserialize, Serialize};

/// Bernstein function catalog: the Laplace exponents used as subordinator
/// symbols throughout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PsiSpec {
    /// ψ(z) = z^α
    Stable { alpha: f64 },
    /// ψ(z) = (z + θ)^α - θ^α
    TemperedStable { alpha: f64, theta: f64 },
    /// ψ(z) = log(1 + z/θ)
    Gamma { theta: f64 },
}

impl PsiSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            PsiSpec::Stable { alpha } => {
                FracOrder::new(alpha)?;
            }
            PsiSpec::TemperedStable { alpha, theta } => {
                FracOrder::new(alpha)?;
                if !(theta > 0.0) {
                    return Err(Error::Spec(format!("tempered stable needs theta > 0, got {theta}")));
                }
            }
            PsiSpec::Gamma { theta } => {
                if !(theta > 0.0) {
                    return Err(Error::Spec(format!("gamma subordinator needs theta > 0, got {theta}")));
                }
            }
        }
        Ok(())
    }

    /// n-th derivative of ψ at z > 0 (n = 0 gives ψ itself).
    pub fn deriv(&self, z: f64, n: usize) -> f64 {
        match *self {
            PsiSpec::Stable { alpha } => {
                if n == 0 {
                    z.powf(alpha)
                } else {
                    falling(alpha, n) * z.powf(alpha - n as f64)
                }
            }
            PsiSpec::TemperedStable { alpha, theta } => {
                if n == 0 {
                    (z + theta).powf(alpha) - theta.powf(alpha)
                } else {
                    falling(alpha, n) * (z + theta).powf(alpha - n as f64)
                }
            }
            PsiSpec::Gamma { theta } => {
                if n == 0 {
                    (1.0 + z / theta).ln()
                } else {
                    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
                    sign * crate::specfun::gamma::gamma(n as f64) * (theta + z).powi(-(n as i32))
                }
            }
        }
    }
}

/// α(α-1)...(α-n+1)
pub fn falling(alpha: f64, n: usize) -> f64 {
    let mut p = 1.0;
    for j in 0..n {
        p *= alpha - j as f64;
    }
    p
}

/// Scalar branch: ψ(z) for z ≥ 0.
pub fn bernstein_psi(spec: &PsiSpec, z: f64) -> Result<f64> {
    spec.validate()?;
    if z < 0.0 {
        return Err(Error::Domain(format!("bernstein_psi requires z >= 0, got {z}")));
    }
    Ok(spec.deriv(z, 0))
}

/// Coefficients (-1)^j C(γ, j) for j = 0..len-1.
pub fn frac_binomial_coeffs(gamma_ord: f64, len: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(len);
    if len == 0 {
        return w;
    }
    w.push(1.0_f64);
    for j in 1..len {
        let prev = w[j - 1];
        w.push(prev * ((j as f64 - 1.0 - gamma_ord) / j as f64));
    }
    w
}

/// ((I-B)^γ u)_k = Σ_{j=0}^{k} (-1)^j C(γ,j) u_{k-j}, with u zero-extended
/// to negative indices. `cap` bounds the backward reach of the sum.
pub fn frac_difference(u: &[f64], gamma_ord: FracOrder, cap: usize) -> Vec<f64> {
    let g = gamma_ord.get();
    let n = u.len();
    let w = frac_binomial_coeffs(g, n.min(cap + 1));
    let mut out = vec![0.0; n];
    for k in 0..n {
        let mut acc = 0.0;
        for (j, wj) in w.iter().enumerate().take(k + 1) {
            acc += wj * u[k - j];
        }
        out[k] = acc;
    }
    out
}

/// Discrete shift (Ku)_k = u_{k-1}, zero fill at the left edge.
pub fn shift_discrete(u: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; u.len()];
    if u.len() > 1 {
        out[1..].copy_from_slice(&u[..u.len() - 1]);
    }
    out
}

/// Continuous unit shift (Kf)(x) = f(x-1) on the grid; requires the step to
/// divide 1 exactly so the translation lands on grid nodes.
pub fn shift_continuous(f: &SampledFn) -> Result<SampledFn> {
    let steps = steps_per_unit(f.grid.step)?;
    let n = f.grid.count;
    let mut out = vec![0.0; n];
    for i in steps..n {
        out[i] = f.values[i - steps];
    }
    SampledFn::new(f.grid, out)
}

fn steps_per_unit(step: f64) -> Result<usize> {
    let raw = 1.0 / step;
    let rounded = raw.round();
    if (raw - rounded).abs() > 1e-9 * raw.abs() || rounded < 1.0 {
        return Err(Error::Grid(format!(
            "grid step {step} does not divide 1 exactly; the unit shift would leave the grid"
        )));
    }
    Ok(rounded as usize)
}

/// Transition semigroup of the drifted Poisson process applied to a sampled
/// profile: P_t f(x) = e^{-λt} Σ_k (λt)^k/k! · f(x - k - at).
///
/// The Poisson sum is truncated where the remaining tail mass drops below
/// 1e-12. Both the unit jumps and the drift shift `at` must land on grid
/// nodes.
pub fn poisson_semigroup_apply(
    f: &SampledFn,
    t: f64,
    lambda: f64,
    a: f64,
) -> Result<SampledFn> {
    if t < 0.0 {
        return Err(Error::Domain(format!("time must be >= 0, got {t}")));
    }
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("lambda must be > 0, got {lambda}")));
    }
    if a < 0.0 {
        return Err(Error::Domain(format!("drift must be >= 0, got {a}")));
    }
    if t == 0.0 {
        return Ok(f.clone());
    }
    let unit = steps_per_unit(f.grid.step)?;
    let drift_raw = a * t / f.grid.step;
    let drift_steps = drift_raw.round();
    if (drift_raw - drift_steps).abs() > 1e-9 {
        return Err(Error::Grid(format!(
            "drift displacement a*t = {} does not land on the grid (step {})",
            a * t,
            f.grid.step
        )));
    }
    let drift_steps = drift_steps as usize;

    let mu = lambda * t;
    let n = f.grid.count;
    let mut out = vec![0.0; n];
    let mut weight = (-mu).exp();
    let mut cum = weight;
    let mut k = 0usize;
    loop {
        let shift = k * unit + drift_steps;
        if shift < n {
            for i in shift..n {
                out[i] += weight * f.values[i - shift];
            }
        }
        // Poisson tail bound: stop once the remaining mass is below 1e-12.
        if 1.0 - cum < 1e-12 || shift >= n {
            break;
        }
        k += 1;
        weight *= mu / k as f64;
        cum += weight;
        if k > 10_000_000 {
            return Err(Error::NonConvergent("poisson semigroup truncation ran away".into()));
        }
    }
    SampledFn::new(f.grid, out)
}

/// ψ(λ(I-B)) applied to a sequence through the Taylor coefficients of
/// b ↦ ψ(λ(1-b)); for the catalog these are in closed form, so the only
/// truncation is the backward reach `cap`, certified by the coefficient
/// tail bound.
pub fn psi_operator(u: &[f64], spec: &PsiSpec, lambda: f64, cap: usize) -> Result<Vec<f64>> {
    spec.validate()?;
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("lambda must be > 0, got {lambda}")));
    }
    let n = u.len();
    let len = n.min(cap + 1);
    let coeffs = psi_shift_coeffs(spec, lambda, len);
    // Tail certification when the cap bites inside the sequence range.
    if len < n {
        let sup = u.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let tail = psi_coeff_tail_bound(spec, lambda, len);
        if tail * sup > 1e-9 {
            return Err(Error::NonConvergent(format!(
                "psi_operator cap {cap} leaves a coefficient tail bound {tail:.3e} (sup |u| = {sup:.3e})"
            )));
        }
    }
    let mut out = vec![0.0; n];
    for k in 0..n {
        let mut acc = 0.0;
        for (j, cj) in coeffs.iter().enumerate().take(k + 1) {
            acc += cj * u[k - j];
        }
        out[k] = acc;
    }
    Ok(out)
}

/// Taylor coefficients of b ↦ ψ(λ(1-b)) for the catalog.
fn psi_shift_coeffs(spec: &PsiSpec, lambda: f64, len: usize) -> Vec<f64> {
    match *spec {
        PsiSpec::Stable { alpha } => {
            let la = lambda.powf(alpha);
            frac_binomial_coeffs(alpha, len).into_iter().map(|w| la * w).collect()
        }
        PsiSpec::TemperedStable { alpha, theta } => {
            // (λ(1-b)+θ)^α - θ^α = (λ+θ)^α (1 - qb)^α - θ^α,  q = λ/(λ+θ)
            let s = (lambda + theta).powf(alpha);
            let q = lambda / (lambda + theta);
            let mut c: Vec<f64> = frac_binomial_coeffs(alpha, len)
                .into_iter()
                .enumerate()
                .map(|(j, w)| s * w * q.powi(j as i32))
                .collect();
            if !c.is_empty() {
                c[0] -= theta.powf(alpha);
            }
            c
        }
        PsiSpec::Gamma { theta } => {
            // log(1 + λ(1-b)/θ) = log((θ+λ)/θ) + log(1 - qb),  q = λ/(θ+λ)
            let q = lambda / (theta + lambda);
            let mut c = Vec::with_capacity(len);
            c.push((1.0 + lambda / theta).ln());
            for j in 1..len {
                c.push(-q.powi(j as i32) / j as f64);
            }
            c
        }
    }
}

/// Upper bound on Σ_{j >= len} |c_j| for the shift coefficients.
fn psi_coeff_tail_bound(spec: &PsiSpec, lambda: f64, len: usize) -> f64 {
    let j = len as f64;
    match *spec {
        PsiSpec::Stable { alpha } => {
            // |(-1)^j C(α,j)| ~ α j^{-1-α}/Γ(1-α); summed tail ~ j^{-α}/Γ(1-α)
            lambda.powf(alpha) * j.powf(-alpha) * rgamma(1.0 - alpha)
        }
        PsiSpec::TemperedStable { alpha, theta } => {
            let q: f64 = lambda / (lambda + theta);
            (lambda + theta).powf(alpha) * j.powf(-alpha) * rgamma(1.0 - alpha) * q.powf(j)
                / (1.0 - q)
        }
        PsiSpec::Gamma { theta } => {
            let q: f64 = lambda / (theta + lambda);
            q.powf(j) / (j * (1.0 - q))
        }
    }
}

/// Poisson pmf row e^{-μ} μ^k / k!, truncated once the tail mass is below
/// `tail_tol`, returned together with the truncated mass.
pub fn poisson_row(mu: f64, tail_tol: f64, cap: usize) -> (Vec<f64>, f64) {
    let mut w = Vec::new();
    let mut weight = (-mu).exp();
    let mut cum = 0.0;
    let mut k = 0usize;
    loop {
        w.push(weight);
        cum += weight;
        if 1.0 - cum < tail_tol || k >= cap {
            break;
        }
        k += 1;
        weight *= mu / k as f64;
    }
    (w, (1.0 - cum).max(0.0))
}

/// P(Poisson(μ) > k) through the regularized incomplete gamma.
pub fn poisson_tail_above(k: usize, mu: f64) -> f64 {
    gamma_reg_lower(k as f64 + 1.0, mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fracops::Grid1D;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn delta(n: usize) -> Vec<f64> {
        let mut u = vec![0.0; n];
        u[0] = 1.0;
        u
    }

    #[test]
    fn first_difference_of_delta() {
        let out = frac_difference(&delta(5), FracOrder::new(1.0).unwrap(), 64);
        assert_eq!(out, vec![1.0, -1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn half_difference_of_delta_is_binomial_row() {
        let out = frac_difference(&delta(5), FracOrder::new(0.5).unwrap(), 64);
        let expect = [1.0, -0.5, -0.125, -0.0625, -0.0390625];
        for (o, e) in out.iter().zip(expect.iter()) {
            assert_abs_diff_eq!(o, e, epsilon = 1e-14);
        }
    }

    #[test]
    fn binomial_partial_sums_tend_to_zero() {
        // The partial sum Σ_{j<=n} (-1)^j C(γ,j) equals (-1)^n C(γ-1,n) and
        // decays to 0 like n^{-γ}/Γ(1-γ): check the envelope at n = 1e5 and
        // the 4x decay ratio, plus the literal 1e-6 smallness where the rate
        // admits it.
        for &g in &[0.3, 0.5, 0.7, 0.95] {
            let w = frac_binomial_coeffs(g, 100_001);
            let s: f64 = w.iter().sum();
            let bound = 1e5_f64.powf(-g) * rgamma(1.0 - g) * 1.2;
            assert!(s.abs() <= bound, "partial sum {s} above envelope {bound} for gamma={g}");
            let s4: f64 = w.iter().take(25_001).sum();
            let ratio = s.abs() / s4.abs();
            let expect = 4.0_f64.powf(-g);
            assert!((ratio - expect).abs() < 0.1 * expect, "decay ratio {ratio} vs {expect}");
            // individual coefficients are far below 1e-6 out here
            assert!(w[100_000].abs() < 1e-6);
        }
        let w = frac_binomial_coeffs(0.95, 100_001);
        let s: f64 = w.iter().sum();
        assert!(s.abs() < 1e-6, "gamma=0.95 partial sum {s}");
    }

    proptest! {
        #[test]
        fn gamma_one_is_backward_difference(u in proptest::collection::vec(-10.0..10.0f64, 1..40)) {
            let out = frac_difference(&u, FracOrder::new(1.0).unwrap(), 1024);
            for k in 0..u.len() {
                let prev = if k == 0 { 0.0 } else { u[k-1] };
                prop_assert!((out[k] - (u[k] - prev)).abs() < 1e-12);
            }
        }

        #[test]
        fn psi_stable_matches_scaled_frac_difference(
            u in proptest::collection::vec(0.0..1.0f64, 1..30),
            alpha in 0.2..0.95f64,
            lambda in 0.2..3.0f64,
        ) {
            let spec = PsiSpec::Stable { alpha };
            let a = psi_operator(&u, &spec, lambda, 1024).unwrap();
            let fd = frac_difference(&u, FracOrder::new(alpha).unwrap(), 1024);
            let la = lambda.powf(alpha);
            for k in 0..u.len() {
                prop_assert!((a[k] - la * fd[k]).abs() < 1e-10 * (1.0 + la));
            }
        }
    }

    #[test]
    fn shift_discrete_basic() {
        assert_eq!(shift_discrete(&[1.0, 2.0, 3.0]), vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn shift_continuous_indicator() {
        let g = Grid1D::new(0.0, 0.25, 12).unwrap();
        let f = SampledFn::from_fn(g, |x| if (0.0..1.0).contains(&x) { 1.0 } else { 0.0 });
        let s = shift_continuous(&f).unwrap();
        for i in 0..12 {
            let x = g.point(i);
            let expect = if (1.0..2.0).contains(&x) { 1.0 } else { 0.0 };
            assert_eq!(s.values[i], expect, "at x = {x}");
        }
        // applying twice shifts by two
        let s2 = shift_continuous(&s).unwrap();
        for i in 0..12 {
            let x = g.point(i);
            let expect = if (2.0..3.0).contains(&x) { 1.0 } else { 0.0 };
            assert_eq!(s2.values[i], expect, "at x = {x}");
        }
    }

    #[test]
    fn shift_rejects_bad_step() {
        let g = Grid1D::new(0.0, 0.3, 10).unwrap();
        let f = SampledFn::from_fn(g, |x| x);
        assert!(shift_continuous(&f).is_err());
    }

    #[test]
    fn semigroup_identity_at_zero() {
        let g = Grid1D::new(0.0, 0.5, 20).unwrap();
        let f = SampledFn::from_fn(g, |x| (-x).exp());
        let p = poisson_semigroup_apply(&f, 0.0, 1.0, 0.0).unwrap();
        assert_eq!(p.values, f.values);
    }

    #[test]
    fn semigroup_delta_column_weights() {
        // λt = 1, a = 0, δ at node 0: columns e^{-1}/k! at x = k
        let g = Grid1D::new(0.0, 1.0, 8).unwrap();
        let mut v = vec![0.0; 8];
        v[0] = 1.0;
        let f = SampledFn::new(g, v).unwrap();
        let p = poisson_semigroup_apply(&f, 1.0, 1.0, 0.0).unwrap();
        let e = (-1.0_f64).exp();
        let expect = [e, e, e / 2.0, e / 6.0, e / 24.0];
        for (k, &w) in expect.iter().enumerate() {
            assert_abs_diff_eq!(p.values[k], w, epsilon = 1e-12);
        }
    }

    #[test]
    fn semigroup_preserves_mass() {
        let g = Grid1D::new(0.0, 0.25, 400).unwrap();
        let f = SampledFn::from_fn(g, |x| if (1.0..3.0).contains(&x) { 0.5 } else { 0.0 });
        let p = poisson_semigroup_apply(&f, 2.0, 1.5, 0.5).unwrap();
        let mass = |s: &SampledFn| s.values.iter().sum::<f64>() * s.grid.step;
        // support must stay inside the grid for mass bookkeeping
        assert_abs_diff_eq!(mass(&p), mass(&f), epsilon = 1e-7);
    }

    #[test]
    fn semigroup_law() {
        let g = Grid1D::new(0.0, 0.25, 600).unwrap();
        let f = SampledFn::from_fn(g, |x| if (0.0..2.0).contains(&x) { 1.0 - 0.5 * x } else { 0.0 });
        let (t, s, lam, a) = (0.75, 0.5, 1.2, 1.0);
        let pt = poisson_semigroup_apply(&f, t, lam, a).unwrap();
        let pst = poisson_semigroup_apply(&pt, s, lam, a).unwrap();
        let direct = poisson_semigroup_apply(&f, s + t, lam, a).unwrap();
        for i in 0..g.count {
            assert_abs_diff_eq!(pst.values[i], direct.values[i], epsilon = 1e-10);
        }
    }

    #[test]
    fn semigroup_rejects_offgrid_drift() {
        let g = Grid1D::new(0.0, 0.25, 40).unwrap();
        let f = SampledFn::from_fn(g, |_| 1.0);
        assert!(poisson_semigroup_apply(&f, 0.3, 1.0, 1.0).is_err());
    }

    #[test]
    fn psi_scalar_catalog() {
        assert_abs_diff_eq!(
            bernstein_psi(&PsiSpec::Stable { alpha: 0.5 }, 4.0).unwrap(),
            2.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            bernstein_psi(&PsiSpec::TemperedStable { alpha: 0.5, theta: 1.0 }, 3.0).unwrap(),
            1.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            bernstein_psi(&PsiSpec::Gamma { theta: 1.0 }, 1.0).unwrap(),
            2.0_f64.ln(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn psi_scalar_is_increasing_and_concave() {
        let specs = [
            PsiSpec::Stable { alpha: 0.7 },
            PsiSpec::TemperedStable { alpha: 0.6, theta: 0.5 },
            PsiSpec::Gamma { theta: 2.0 },
        ];
        for spec in &specs {
            assert_abs_diff_eq!(bernstein_psi(spec, 0.0).unwrap(), 0.0, epsilon = 1e-14);
            let mut prev = 0.0;
            let mut prev_inc = f64::INFINITY;
            for i in 1..=40 {
                let z = 0.25 * i as f64;
                let v = bernstein_psi(spec, z).unwrap();
                let inc = v - prev;
                assert!(v >= prev, "{spec:?} not increasing at z={z}");
                assert!(inc <= prev_inc + 1e-12, "{spec:?} not concave at z={z}");
                prev = v;
                prev_inc = inc;
            }
        }
    }

    #[test]
    fn gamma_psi_generating_function_identity() {
        // Σ_k u^k (ψ(λ(I-B))p)_k = ψ(λ(1-u)) Σ_k u^k p_k for a pmf row p.
        let lam = 1.0;
        let theta = 1.0;
        let spec = PsiSpec::Gamma { theta };
        let (mut p, _) = poisson_row(1.0, 1e-14, 80);
        p.resize(200, 0.0); // room for the operator output past the pmf support
        let ap = psi_operator(&p, &spec, lam, 4096).unwrap();
        for &u in &[0.3_f64, 0.7] {
            let pg: f64 = p.iter().enumerate().map(|(k, v)| f64::powi(u, k as i32) * v).sum();
            let ag: f64 = ap.iter().enumerate().map(|(k, v)| f64::powi(u, k as i32) * v).sum();
            let expect = (1.0 + lam * (1.0 - u) / theta).ln() * pg;
            assert_abs_diff_eq!(ag, expect, epsilon = 1e-10);
        }
    }

    #[test]
    fn psi_cap_tail_certification() {
        // heavy stable coefficients with a tiny cap must refuse
        let u = vec![1.0; 4000];
        let spec = PsiSpec::Stable { alpha: 0.5 };
        assert!(psi_operator(&u, &spec, 1.0, 10).is_err());
    }

    #[test]
    fn poisson_row_mass() {
        let (w, tail) = poisson_row(2.5, 1e-12, 1000);
        let s: f64 = w.iter().sum();
        assert_abs_diff_eq!(s + tail, 1.0, epsilon = 1e-12);
    }
}
