//! Closed-form and transform-level checks: special-function reference
//! values, Laplace identities of the densities, pmf consistency, the
//! double-Laplace suite, the hitting boundary profile and the transform
//! scaling symmetry.

use serde_json::json;

use super::VerificationReport;
use crate::error::Result;
use crate::laws::{
    clock_density, clock_laplace, hitting_boundary_u0, hitting_transform, pgf_stf, pmf_quadrature_row,
    pmf_stf, pmf_stf_row, pmf_tail_quadrature, FracParams,
};
use crate::quad;
use crate::specfun::gamma::erfc;
use crate::specfun::{inv_stable_density, mittag_leffler, stable_density, FracOrder};
use std::f64::consts::PI;

fn ord(v: f64) -> FracOrder {
    FracOrder::new(v).unwrap()
}

/// Special-function reference values: the exponential reduction of the
/// Mittag-Leffler function, the half-order closed forms, and the stable /
/// inverse-stable densities at order 1/2.
pub fn check_ml_special_values(_seed: u64) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();

    let mut worst = 0.0_f64;
    for i in 1..=100 {
        let x = 0.1 * i as f64;
        let v = mittag_leffler(1.0, 1.0, -x)?.value;
        worst = worst.max((v - (-x).exp()).abs());
    }
    out.push(VerificationReport::residual(
        "ml-special-values",
        worst,
        1e-12,
        100,
        json!({"rho": 1.0, "varrho": 1.0}),
        "E_1(-x) = e^{-x}",
    ));

    // 40-digit oracle for E_{1/2}(-1), cross-checked by e^{x^2} erfc(x)
    let reference = 0.4275835761558070044107503_f64;
    let v = mittag_leffler(0.5, 1.0, -1.0)?.value;
    let dev = (v - reference).abs().max((v - 1.0_f64.exp() * erfc(1.0)).abs());
    out.push(VerificationReport::residual(
        "ml-special-values",
        dev,
        1e-10,
        1,
        json!({"rho": 0.5, "z": -1.0}),
        "E_{1/2}(-1) = e erfc(1)",
    ));

    let mut worst = 0.0_f64;
    for i in 0..=50 {
        let x = 0.1 * i as f64;
        let v = inv_stable_density(0.5, x, 1.0)?;
        worst = worst.max((v - (-x * x / 4.0).exp() / PI.sqrt()).abs());
    }
    out.push(VerificationReport::residual(
        "ml-special-values",
        worst,
        1e-8,
        51,
        json!({"alpha": 0.5, "t": 1.0}),
        "l_{1/2}(x,1) = e^{-x^2/4}/sqrt(pi)",
    ));

    let mut worst = 0.0_f64;
    for i in 1..=50 {
        let x = 0.1 * i as f64;
        let v = stable_density(0.5, x, 1.0)?;
        let exact = (-1.0 / (4.0 * x)).exp() / (2.0 * PI.sqrt() * x.powf(1.5));
        worst = worst.max((v - exact).abs());
    }
    out.push(VerificationReport::residual(
        "ml-special-values",
        worst,
        1e-8,
        50,
        json!({"alpha": 0.5, "t": 1.0}),
        "h_{1/2}(x,1) = e^{-1/(4x)}/(2 sqrt(pi) x^{3/2})",
    ));
    Ok(out)
}

/// ∫₀^∞ w(x) g(x) dx with the x^{c-1}-type origin behavior absorbed by the
/// substitution x = v^{1/c} on [0,1], plus a rational tail map.
fn integrate_density(g: impl Fn(f64) -> f64, c: f64, tol: f64) -> Result<f64> {
    let head = quad::integrate(
        |v| {
            if v <= 0.0 {
                return 0.0;
            }
            let x = v.powf(1.0 / c);
            g(x) * x / (c * v)
        },
        0.0,
        1.0,
        tol,
    )?;
    let tail = quad::integrate(
        |u| {
            if u <= 0.0 || u >= 1.0 {
                return 0.0;
            }
            let x = 1.0 + (1.0 - u) / u;
            g(x) / (u * u)
        },
        0.0,
        1.0,
        tol,
    )?;
    Ok(head.value + tail.value)
}

/// Laplace identities of the three densities:
/// ∫ e^{-ξx} h_α = e^{-tξ^α}, ∫ e^{-ξx} l_α = E_α(-t^α ξ),
/// ∫ e^{-ξx} f^{α,β} = E_β(-t^β ξ^α).
pub fn check_laplace_identities(_seed: u64) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let t = 1.0;
    for &(a, b) in &[(0.5, 0.5), (0.7, 0.8)] {
        for &xi in &[0.5_f64, 1.0, 2.0] {
            let got = integrate_density(|x| (-xi * x).exp() * stable_density(a, x, t).unwrap(), a, 1e-8)?;
            let expect = (-t * xi.powf(a)).exp();
            out.push(VerificationReport::residual(
                "laplace-identities",
                (got - expect).abs(),
                1e-5,
                0,
                json!({"alpha": a, "xi": xi}),
                "int e^{-xi x} h_a(x,t) dx = e^{-t xi^a}",
            ));

            let got = integrate_density(|x| (-xi * x).exp() * inv_stable_density(b, x, t).unwrap(), 1.0, 1e-8)?;
            let expect = mittag_leffler(b, 1.0, -t.powf(b) * xi)?.value;
            out.push(VerificationReport::residual(
                "laplace-identities",
                (got - expect).abs(),
                1e-5,
                0,
                json!({"beta": b, "xi": xi}),
                "int e^{-xi x} l_b(x,t) dx = E_b(-t^b xi)",
            ));

            let got = integrate_density(
                |x| (-xi * x).exp() * clock_density(x, t, ord(a), ord(b)).unwrap(),
                a,
                1e-8,
            )?;
            let expect = clock_laplace(xi, t, ord(a), ord(b))?;
            out.push(VerificationReport::residual(
                "laplace-identities",
                (got - expect).abs(),
                1e-5,
                0,
                json!({"alpha": a, "beta": b, "xi": xi}),
                "int e^{-xi x} f_t^{a,b}(x) dx = E_b(-t^b xi^a)",
            ));
        }
    }
    Ok(out)
}

/// pmf consistency: the closed series against the quadrature route, the
/// truncation-mass accounting, and the Poisson reduction.
pub fn check_pmf_consistency(_seed: u64) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let p = FracParams::new(0.7, 0.8, 1.0, 1.0, 0.0, 0.0)?;
    let t = 1.0;

    let series = pmf_stf_row(10, t, &p)?;
    let quadr = pmf_quadrature_row(10, t, &p)?;
    let worst = series
        .iter()
        .zip(quadr.iter())
        .map(|(s, q)| (s - q).abs())
        .fold(0.0_f64, f64::max);
    out.push(VerificationReport::residual(
        "pmf-consistency",
        worst,
        1e-6,
        11,
        json!({"alpha": 0.7, "beta": 0.8, "lambda": 1.0, "t": 1.0}),
        "p_k series = int Pois_k(lambda s) f_t(s) ds, k <= 10",
    ));

    // normalization with independent tail accounting at K = 30
    let row = pmf_stf_row(30, t, &p)?;
    let head: f64 = row.iter().sum();
    let tail = pmf_tail_quadrature(30, t, &p)?;
    out.push(VerificationReport::residual(
        "pmf-consistency",
        (head + tail - 1.0).abs(),
        1e-6,
        31,
        json!({"K": 30}),
        "sum_{k<=K} p_k + P(N > K) = 1",
    ));
    out.push(VerificationReport::residual(
        "pmf-consistency",
        ((1.0 - head) - tail).abs(),
        1e-6,
        31,
        json!({"K": 30}),
        "series remainder equals the quadrature tail",
    ));

    // Poisson reduction at alpha = beta = 1
    let pp = FracParams::new(1.0, 1.0, 1.0, 1.3, 0.0, 0.0)?;
    let mut worst = 0.0_f64;
    let mu = 1.3 * 0.9;
    let mut w = (-mu as f64).exp();
    for k in 0..25 {
        worst = worst.max((pmf_stf(k, 0.9, &pp)? - w).abs());
        w *= mu / (k as f64 + 1.0);
    }
    out.push(VerificationReport::residual(
        "pmf-consistency",
        worst,
        1e-12,
        25,
        json!({"alpha": 1.0, "beta": 1.0}),
        "p_k(t;1,1) = Poisson(lambda t)",
    ));

    // pgf cross-check at interior points
    let row = pmf_stf_row(400, t, &p)?;
    let mut worst = 0.0_f64;
    for &u in &[0.0_f64, 0.3, 0.7, 1.0] {
        let direct: f64 = row.iter().enumerate().map(|(k, w)| u.powi(k as i32) * w).sum();
        let via = pgf_stf(u, t, &p)?;
        // u = 1 compares against the truncated mass, account for the tail
        let adj = if u == 1.0 { pmf_tail_quadrature(400, t, &p)? } else { 0.0 };
        worst = worst.max((direct + adj - via).abs());
    }
    out.push(VerificationReport::residual(
        "pmf-consistency",
        worst,
        1e-6,
        4,
        json!({"u": [0.0, 0.3, 0.7, 1.0]}),
        "pgf(u) = sum u^k p_k",
    ));
    Ok(out)
}

/// The double-Laplace identities of the composed clock, the drifted
/// process and the hitting time.
pub fn check_double_laplace_suite(_seed: u64) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();

    // x^{β-1} μ^{α-1} E_{β,β}(-x^β μ^α) integrates to μ^{α-1}/(μ^α + ξ^β);
    // substitute y = x^β to absorb the origin weight.
    for &(al, be, mu, xi) in &[(0.6_f64, 0.7_f64, 1.0_f64, 1.0_f64), (0.6, 0.7, 1.5, 0.8)] {
        let q = quad::integrate(
            |u: f64| {
                if u <= 0.0 || u >= 1.0 {
                    return 0.0;
                }
                let y = (1.0 - u) / u;
                let x = y.powf(1.0 / be);
                let e = mittag_leffler(be, be, -y * mu.powf(al)).unwrap().value;
                mu.powf(al - 1.0) * (-xi * x).exp() * e / be / (u * u)
            },
            0.0,
            1.0,
            1e-10,
        )?;
        let expect = mu.powf(al - 1.0) / (mu.powf(al) + xi.powf(be));
        out.push(VerificationReport::residual(
            "double-laplace",
            (q.value - expect).abs(),
            1e-8,
            0,
            json!({"alpha": al, "beta": be, "mu": mu, "xi": xi}),
            "int e^{-xi x} x^{b-1} mu^{a-1} E_{b,b}(-x^b mu^a) dx = mu^{a-1}/(mu^a + xi^b)",
        ));
    }

    // degenerate orders: plain exponential pair 1/(μ+ξ)
    {
        let (mu, xi) = (1.3_f64, 0.7_f64);
        let q = quad::integrate_to_inf(|x| (-xi * x).exp() * (-mu * x).exp(), 0.0, 1e-12)?;
        out.push(VerificationReport::residual(
            "double-laplace",
            (q.value - 1.0 / (mu + xi)).abs(),
            1e-10,
            0,
            json!({"mu": mu, "xi": xi}),
            "degenerate orders give 1/(mu + xi)",
        ));
    }

    // drifted process: ∫ e^{-μt} E_β(-t^β c) dt = μ^{β-1}/(μ^β + c),
    // c = a^α ξ^α + λ^γ(1-e^{-ξ})^γ
    for &(al, be, ga, a, lam, xi, mu) in &[
        (0.6_f64, 0.7_f64, 0.8_f64, 1.0_f64, 1.0_f64, 1.0_f64, 1.0_f64),
        (0.5, 0.8, 0.6, 0.5, 2.0, 0.7, 1.2),
    ] {
        let c = a.powf(al) * xi.powf(al) + lam.powf(ga) * (1.0 - (-xi).exp()).powf(ga);
        let q = quad::integrate(
            |u: f64| {
                if u <= 0.0 || u >= 1.0 {
                    return 0.0;
                }
                let t = (1.0 - u) / u;
                (-mu * t).exp() * mittag_leffler(be, 1.0, -t.powf(be) * c).unwrap().value / (u * u)
            },
            0.0,
            1.0,
            1e-10,
        )?;
        let expect = mu.powf(be - 1.0) / (mu.powf(be) + c);
        out.push(VerificationReport::residual(
            "double-laplace",
            (q.value - expect).abs(),
            1e-8,
            0,
            json!({"alpha": al, "beta": be, "gamma": ga, "a": a, "lambda": lam, "xi": xi, "mu": mu}),
            "int e^{-mu t} E_b(-t^b (a^a xi^a + l^g (1-e^{-xi})^g)) dt = mu^{b-1}/(mu^b + c)",
        ));
    }

    // hitting-time transform: ∫ e^{-μx} h̃(x,ξ) dx closed pair
    for &(be, ga, b, lam, xi, mu) in &[
        (0.6_f64, 0.8_f64, 1.0_f64, 1.0_f64, 1.0_f64, 1.0_f64),
        (0.5, 0.7, 0.5, 2.0, 0.7, 1.4),
    ] {
        let q = quad::integrate(
            |u: f64| {
                if u <= 0.0 || u >= 1.0 {
                    return 0.0;
                }
                let x = (1.0 - u) / u;
                (-mu * x).exp() * hitting_transform(x, xi, ord(be), ord(ga), b, lam).unwrap()
                    / (u * u)
            },
            0.0,
            1.0,
            1e-11,
        )?;
        let s = b.powf(be) * xi.powf(be) + lam.powf(ga) * (1.0 - (-xi as f64).exp()).powf(ga);
        let expect = (b.powf(be) * xi.powf(be - 1.0)
            + lam.powf(ga) * (1.0 - (-xi as f64).exp()).powf(ga) / xi)
            / (mu + s);
        out.push(VerificationReport::residual(
            "double-laplace",
            (q.value - expect).abs(),
            1e-8,
            0,
            json!({"beta": be, "gamma": ga, "b": b, "lambda": lam, "xi": xi, "mu": mu}),
            "int e^{-mu x} h~(x,xi) dx = (b^B xi^{B-1} + xi^{-1} l^g j(xi)) / (mu + b^B xi^B + l^g j(xi))",
        ));
    }
    Ok(out)
}

/// Boundary staircase of the hitting-time equation: Laplace identity and
/// the order-one window reduction.
pub fn check_hitting_boundary(_seed: u64) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for &(g, lam) in &[(0.5_f64, 1.0_f64), (0.8, 2.0)] {
        let mut worst = 0.0_f64;
        for &xi in &[0.5_f64, 1.0, 2.0] {
            // piecewise-exact integration over the unit steps
            let mut acc = 0.0;
            for k in 0..256 {
                let u = hitting_boundary_u0(k as f64 + 0.5, ord(g), lam)?;
                let t0 = k as f64;
                acc += u * ((-xi * t0).exp() - (-xi * (t0 + 1.0)).exp()) / xi;
            }
            let expect = lam.powf(g) * (1.0 - (-xi as f64).exp()).powf(g) / xi;
            worst = worst.max((acc - expect).abs());
        }
        out.push(VerificationReport::residual(
            "hitting-boundary",
            worst,
            1e-6,
            256,
            json!({"gamma": g, "lambda": lam}),
            "int e^{-xi t} u(0,t) dt = xi^{-1} lambda^g (1-e^{-xi})^g",
        ));
    }
    // order-one window: u(0,t) = λ for t in [0,1), 0 after
    let lam = 1.7;
    let exact = (hitting_boundary_u0(0.5, ord(1.0), lam)? - lam).abs()
        + hitting_boundary_u0(1.5, ord(1.0), lam)?.abs();
    out.push(VerificationReport::residual(
        "hitting-boundary",
        exact,
        0.0,
        2,
        json!({"gamma": 1.0, "lambda": lam}),
        "u(0,t) = lambda [H(t) - H(t-1)] at gamma = 1",
    ));
    Ok(out)
}

/// Scaling symmetry of the clock transform: α t ∂_t = β ξ ∂_ξ on a grid,
/// probed by Richardson central differences.
pub fn check_eigen_and_dertf(_seed: u64) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let f = |a: f64, b: f64, xi: f64, t: f64| clock_laplace(xi, t, ord(a), ord(b)).unwrap();
    for &(a, b) in &[(0.5_f64, 0.5_f64), (0.7, 0.8)] {
        let mut worst = 0.0_f64;
        for &t in &[0.5_f64, 1.0, 2.0] {
            for &xi in &[0.5_f64, 1.0, 2.0] {
                let h = 1e-4;
                let dt = (f(a, b, xi, t + h) - f(a, b, xi, t - h)) / (2.0 * h);
                let dxi = (f(a, b, xi + h, t) - f(a, b, xi - h, t)) / (2.0 * h);
                worst = worst.max((a * t * dt - b * xi * dxi).abs());
            }
        }
        out.push(VerificationReport::residual(
            "eigen-dertf",
            worst,
            1e-5,
            9,
            json!({"alpha": a, "beta": b}),
            "alpha t d/dt E_b(-t^b xi^a) = beta xi d/dxi E_b(-t^b xi^a)",
        ));
    }
    // ξ → 0 end: both sides vanish
    let h = 1e-4;
    let a = 0.6;
    let b = 0.7;
    let dxi = (f(a, b, 2.0 * h, 1.0) - f(a, b, 0.0, 1.0)) / (2.0 * h);
    let lhs = b * 0.0 * dxi;
    out.push(VerificationReport::residual(
        "eigen-dertf",
        lhs.abs(),
        1e-12,
        1,
        json!({"xi": 0.0}),
        "both sides vanish at xi = 0",
    ));
    Ok(out)
}
