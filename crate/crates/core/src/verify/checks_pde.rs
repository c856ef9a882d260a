//! Governing-equation checks: discretized operators applied to the closed
//! laws, interior-band residuals, refinement behavior, the transport
//! equation of the drifted lattice law, and the higher-order alternative
//! equation with its initial data.

use serde_json::json;

use super::VerificationReport;
use crate::error::Result;
use crate::fracops::{
    caputo_derivative, falling, frac_binomial_coeffs, rl_derivative_left0, rl_derivative_rightsided,
    Grid1D, SampledFn,
};
use crate::laws::{clock_density, drifted_poisson_law, pmf_stf, pmf_stf_row, FracParams};
use crate::specfun::gamma::{ln_gamma, ln_gamma_abs_sign, rgamma};
use crate::specfun::{mittag_leffler, FracOrder};

fn ord(v: f64) -> FracOrder {
    FracOrder::new(v).unwrap()
}

/// Interior relative L2 of a residual array, excluding boundary bands.
fn interior_rel_l2(residual: &[f64], reference: &[f64], skip_lo: usize, skip_hi: usize) -> f64 {
    let n = residual.len();
    let mut num = 0.0;
    let mut den = 0.0;
    for i in skip_lo..n - skip_hi {
        num += residual[i] * residual[i];
        den += reference[i] * reference[i];
    }
    (num / den.max(1e-300)).sqrt()
}

/// Caputo eigenfunction identity 𝒟^β E_β(-λt^β) = -λ E_β(-λt^β),
/// relative L2 over [0.01, 2] at 4000 points (5% boundary band excluded).
pub fn check_caputo_eigen(_seed: u64) -> Result<Vec<VerificationReport>> {
    let beta = 0.6;
    let lambda = 1.0;
    let g = Grid1D::over(0.01, 2.0, 4000)?;
    let f = SampledFn::from_fn(g, |t| mittag_leffler(beta, 1.0, -lambda * t.powf(beta)).unwrap().value);
    let d = caputo_derivative(&f, ord(beta), 1.0)?;
    let resid: Vec<f64> = (0..g.count).map(|i| d.values[i] + lambda * f.values[i]).collect();
    let refv: Vec<f64> = f.values.iter().map(|v| lambda * v).collect();
    let rel = interior_rel_l2(&resid, &refv, g.count / 20, 0);
    Ok(vec![VerificationReport::residual(
        "caputo-eigen",
        rel,
        1e-2,
        4000,
        json!({"beta": beta, "lambda": lambda, "window": [0.01, 2.0]}),
        "D_t^b E_b(-l t^b) = -l E_b(-l t^b)",
    )])
}

/// Residual of (𝒟^β_t + λ^α (I-B)^α) p_k(t; α, β) = 0 on a grid anchored
/// at 0, together with its behavior under 4x refinement; the degenerate
/// α = β = 1 case reduces to the first-order lattice equation.
pub fn check_pde_stf(_seed: u64) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let p = FracParams::new(0.7, 0.8, 1.0, 1.0, 0.0, 0.0)?;
    let kmax = 8;

    // Threshold pinned by the refinement study in `calibration_pde_stf`
    // (4000 points, interior 5% bands): measured 2.6e-3 at 4000 points
    // with empirical order ~0.8; 5e-2 is the shipped bound.
    let coarse = pde_stf_residual(&p, 1000, kmax)?;
    let fine = pde_stf_residual(&p, 4000, kmax)?;
    out.push(VerificationReport::residual(
        "pde-stf",
        fine,
        5e-2,
        4000,
        json!({"alpha": 0.7, "beta": 0.8, "kmax": kmax}),
        "(D_t^b + l^a (I-B)^a) p_k = 0",
    ));
    let order = (coarse / fine).log2() / 2.0;
    out.push(VerificationReport::residual(
        "pde-stf",
        -order,
        -0.5,
        4000,
        json!({"coarse": coarse, "fine": fine}),
        "residual shrinks under 4x refinement with order >= 0.5",
    ));

    // k = 0 closed form: 𝒟^β E_β(-λ^α t^β) + λ^α E_β = 0
    let g = Grid1D::over(0.01, 2.0, 4000)?;
    let la = 1.0_f64.powf(0.7);
    let f = SampledFn::from_fn(g, |t| mittag_leffler(0.8, 1.0, -la * t.powf(0.8)).unwrap().value);
    let d = caputo_derivative(&f, ord(0.8), 1.0)?;
    let resid: Vec<f64> = (0..g.count).map(|i| d.values[i] + la * f.values[i]).collect();
    let refv: Vec<f64> = f.values.iter().map(|v| la * v).collect();
    let rel = interior_rel_l2(&resid, &refv, g.count / 20, 0);
    out.push(VerificationReport::residual(
        "pde-stf",
        rel,
        1e-2,
        4000,
        json!({"k": 0}),
        "k = 0 row is the Mittag-Leffler eigenfunction",
    ));

    // α = β = 1: dp_k/dt = -λ(p_k - p_{k-1}) at first-difference accuracy
    let pp = FracParams::new(1.0, 1.0, 1.0, 1.0, 0.0, 0.0)?;
    let g = Grid1D::over(0.0, 2.0, 2000)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for i in 0..g.count {
        let t = g.point(i).max(1e-12);
        rows.push(pmf_stf_row(kmax, t, &pp)?);
    }
    let mut worst = 0.0_f64;
    for k in 0..=kmax {
        for i in 1..g.count - 1 {
            let dpdt = (rows[i + 1][k] - rows[i - 1][k]) / (2.0 * g.step);
            let prev = if k == 0 { 0.0 } else { rows[i][k - 1] };
            let r = dpdt + (rows[i][k] - prev);
            worst = worst.max(r.abs());
        }
    }
    out.push(VerificationReport::residual(
        "pde-stf",
        worst,
        1e-5,
        2000,
        json!({"alpha": 1.0, "beta": 1.0}),
        "dp_k/dt = -lambda (p_k - p_{k-1}) at orders one",
    ));
    Ok(out)
}

fn pde_stf_residual(p: &FracParams, npts: usize, kmax: usize) -> Result<f64> {
    let (a, b, lam) = (p.alpha.get(), p.beta.get(), p.lambda);
    let g = Grid1D::over(0.0, 2.0, npts)?;
    // p_k(t) rows for k = 0..kmax on the grid
    let mut cols: Vec<Vec<f64>> = vec![vec![0.0; g.count]; kmax + 1];
    for i in 0..g.count {
        let t = g.point(i);
        let row = if t == 0.0 {
            let mut r = vec![0.0; kmax + 1];
            r[0] = 1.0;
            r
        } else {
            pmf_stf_row(kmax, t, p)?
        };
        for (k, col) in cols.iter_mut().enumerate() {
            col[i] = row[k];
        }
    }
    let la = lam.powf(a);
    let w = frac_binomial_coeffs(a, kmax + 1);
    let mut num = 0.0;
    let mut den = 0.0;
    let lo = g.count / 20;
    for (k, col) in cols.iter().enumerate() {
        let f = SampledFn::new(g, col.clone())?;
        let f0 = if k == 0 { 1.0 } else { 0.0 };
        let d = caputo_derivative(&f, ord(b), f0)?;
        for i in lo..g.count {
            let mut jump = 0.0;
            for (j, wj) in w.iter().enumerate().take(k + 1) {
                jump += wj * cols[k - j][i];
            }
            let r = d.values[i] + la * jump;
            num += r * r;
            den += (la * jump).powi(2);
        }
    }
    Ok((num / den.max(1e-300)).sqrt())
}

/// Transport equation of the drifted lattice law at transform level:
/// ∂_t p̃_ξ = (-aξ - λ(1-e^{-ξ})) p̃_ξ.
pub fn check_transport_laplace(_seed: u64) -> Result<Vec<VerificationReport>> {
    let (lam, a) = (1.0, 1.0);
    let mut worst = 0.0_f64;
    for &xi in &[0.0_f64, 0.5, 1.0, 2.0] {
        let tr = |t: f64| drifted_poisson_law(t, lam, a).unwrap().laplace(xi, 0.0).unwrap();
        let t = 1.0;
        let h = 1e-4;
        let d1 = (tr(t + h) - tr(t - h)) / (2.0 * h);
        let d2 = (tr(t + 2.0 * h) - tr(t - 2.0 * h)) / (4.0 * h);
        let dt = (4.0 * d1 - d2) / 3.0;
        let rhs = (-a * xi - lam * (1.0 - (-xi as f64).exp())) * tr(t);
        worst = worst.max((dt - rhs).abs());
    }
    Ok(vec![VerificationReport::residual(
        "transport-laplace",
        worst,
        1e-6,
        4,
        json!({"lambda": lam, "a": a, "xi": [0.0, 0.5, 1.0, 2.0]}),
        "d/dt E e^{-xi(N(t)+at)} = (-a xi - l(1-e^{-xi})) E e^{-xi(N(t)+at)}",
    )])
}

/// Residual of (𝒟^β_t + ∂^α_x) f_t(x) = 0 on an (x, t) grid, plus the
/// order-one-in-β variant (d²/d(-t)² - ∂_x) h_{1/2} = 0 and the small-t
/// mass concentration.
pub fn check_clock_pde(_seed: u64) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let (a, b) = (0.5, 0.5);
    let (nx, nt) = (60, 48);
    let gx = Grid1D::over(0.0, 3.0, nx)?;
    let gt = Grid1D::over(0.05, 1.25, nt)?;
    let mut f = vec![vec![0.0; nx]; nt];
    for (it, row) in f.iter_mut().enumerate() {
        let t = gt.point(it);
        for (ix, v) in row.iter_mut().enumerate() {
            *v = clock_density(gx.point(ix), t, ord(a), ord(b))?;
        }
    }
    // Caputo in t along each x-column (density vanishes at t→0 for x>0),
    // Grünwald–Letnikov in x along each t-row.
    let mut dt = vec![vec![0.0; nx]; nt];
    for ix in 1..nx {
        let col: Vec<f64> = (0..nt).map(|it| f[it][ix]).collect();
        let s = SampledFn::new(gt, col)?;
        let d = caputo_derivative(&s, ord(b), 0.0)?;
        for it in 0..nt {
            dt[it][ix] = d.values[it];
        }
    }
    let mut dx = vec![vec![0.0; nx]; nt];
    for it in 0..nt {
        let s = SampledFn::new(gx, f[it].clone())?;
        let d = rl_derivative_left0(&s, ord(a))?;
        dx[it] = d.values;
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for it in nt / 10..nt - nt / 10 {
        for ix in nx / 10..nx - nx / 10 {
            let r = dt[it][ix] + dx[it][ix];
            num += r * r;
            den += dx[it][ix] * dx[it][ix];
        }
    }
    let rel = (num / den).sqrt();
    // Threshold pinned by `calibration_clock_pde`: measured 6.3e-2 on this
    // grid, first-order schemes on a coarse lattice.
    out.push(VerificationReport::residual(
        "clock-pde",
        rel,
        1.5e-1,
        (nx * nt) as u64,
        json!({"alpha": a, "beta": b, "nx": nx, "nt": nt}),
        "(D_t^b + d^a/dx^a) f_t(x) = 0",
    ));

    // β = 1 variant through the right-sided derivative:
    // (d²/d(-t)² - ∂_x) h_{1/2}(x, t) = 0
    let gx2 = Grid1D::over(0.4, 3.4, 31)?;
    let gt2 = Grid1D::over(0.0, 30.0, 3001)?;
    let mut worst = 0.0_f64;
    for ix in 1..gx2.count - 1 {
        let x = gx2.point(ix);
        let col = SampledFn::from_fn(gt2, |t| {
            if t == 0.0 {
                0.0
            } else {
                crate::specfun::stable_density(0.5, x, t).unwrap()
            }
        });
        let d2 = rl_derivative_rightsided(&col, 2.0)?;
        // central x-derivative at a few interior t nodes
        for &it in &[40usize, 80, 160, 240] {
            let t = gt2.point(it);
            let hh = gx2.step;
            let dfdx = (crate::specfun::stable_density(0.5, x + hh, t)?
                - crate::specfun::stable_density(0.5, x - hh, t)?)
                / (2.0 * hh);
            let r = d2.values[it] - dfdx;
            let scale = dfdx.abs().max(1e-3);
            worst = worst.max(r.abs() / scale);
        }
    }
    // Threshold pinned by `calibration_clock_pde`.
    out.push(VerificationReport::residual(
        "clock-pde",
        worst,
        2e-2,
        31,
        json!({"alpha": 0.5}),
        "(d^2/d(-t)^2 - d/dx) h_{1/2}(x,t) = 0",
    ));

    // t → 0: the density mass concentrates (still integrates to 1)
    let t0 = 0.05;
    let q = crate::quad::integrate(
        |v: f64| {
            if v <= 0.0 {
                return 0.0;
            }
            let x = v.powf(2.0);
            clock_density(x, t0, ord(a), ord(b)).unwrap() * 2.0 * v
        },
        0.0,
        40.0,
        1e-7,
    )?;
    out.push(VerificationReport::residual(
        "clock-pde",
        (q.value - 1.0).abs(),
        1e-3,
        0,
        json!({"t": t0}),
        "mass stays 1 as t -> 0",
    ));
    Ok(out)
}

/// The alternative higher-order equation of the jump-order law and its
/// initial data: (d^{1/α}/d(-t)^{1/α} - λ(I-B)) p_k(t; α, 1) = 0.
pub fn check_higher_order(_seed: u64) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let lam = 1.0_f64;

    // (i) α = 1/2 analytic: p_k'' = λ(p_k - p_{k-1}) with the second
    // derivative taken term by term in the series.
    let mut worst = 0.0_f64;
    for k in 0..=2 {
        for &t in &[0.5_f64, 1.0, 1.5] {
            let d2 = stf_beta1_term_derivative(k, t, 0.5, lam, 2)?;
            let pk = pmf_stf(k, t, &FracParams::new(0.5, 1.0, 1.0, lam, 0.0, 0.0)?)?;
            let pk1 = if k == 0 {
                0.0
            } else {
                pmf_stf(k - 1, t, &FracParams::new(0.5, 1.0, 1.0, lam, 0.0, 0.0)?)?
            };
            worst = worst.max((d2 - lam * (pk - pk1)).abs());
        }
    }
    out.push(VerificationReport::residual(
        "higher-order",
        worst,
        1e-10,
        9,
        json!({"alpha": 0.5}),
        "p_k'' = lambda (p_k - p_{k-1}) for the order-1/2 jump law",
    ));

    // sanity anchor: p_0(t; 1/2, 1) = e^{-t sqrt(λ)} so p_0'' = λ p_0
    let t = 0.8;
    let d2 = stf_beta1_term_derivative(0, t, 0.5, lam, 2)?;
    out.push(VerificationReport::residual(
        "higher-order",
        (d2 - lam * (-t * lam.sqrt()).exp()).abs(),
        1e-12,
        1,
        json!({"k": 0}),
        "p_0'' = lambda e^{-t sqrt(lambda)}",
    ));

    // (ii) general α: grid residual of the right-sided derivative against
    // λ(p_k - p_{k-1}). Thresholds pinned by `calibration_higher_order`.
    for &(al, thr) in &[(1.0 / 3.0, 2e-2), (0.4, 2e-2)] {
        let nu = 1.0 / al;
        let p = FracParams::new(al, 1.0, 1.0, lam, 0.0, 0.0)?;
        let g = Grid1D::over(0.0, 40.0, 4001)?;
        let mut worst_rel = 0.0_f64;
        for k in 0..=2usize {
            let col = SampledFn::from_fn(g, |t| {
                if t == 0.0 {
                    if k == 0 { 1.0 } else { 0.0 }
                } else {
                    pmf_stf(k, t, &p).unwrap()
                }
            });
            let d = rl_derivative_rightsided(&col, nu)?;
            let mut num = 0.0;
            let mut den = 0.0;
            for i in g.count / 10..g.count / 2 {
                let t = g.point(i);
                let pk = pmf_stf(k, t, &p)?;
                let pk1 = if k == 0 { 0.0 } else { pmf_stf(k - 1, t, &p)? };
                let rhs = lam * (pk - pk1);
                let r = d.values[i] - rhs;
                num += r * r;
                den += rhs * rhs;
            }
            worst_rel = worst_rel.max((num / den.max(1e-300)).sqrt());
        }
        out.push(VerificationReport::residual(
            "higher-order",
            worst_rel,
            thr,
            4001,
            json!({"alpha": al, "nu": nu}),
            "(d^{1/a}/d(-t)^{1/a} - lambda(I-B)) p_k(t;a,1) = 0",
        ));
    }

    // (iii) initial derivatives: Richardson finite differences of the pmf
    // near 0 against the closed formula (-1)^{k+j} λ^{αj} Γ(αj+1)/(k! Γ(αj+1-k)).
    let mut worst = 0.0_f64;
    for &al in &[1.0 / 3.0, 0.4] {
        let p = FracParams::new(al, 1.0, 1.0, lam, 0.0, 0.0)?;
        let jmax = (1.0 / al).floor() as usize - 1;
        for j in 1..=jmax {
            for k in 0..=2usize {
                let fd = initial_derivative_fd(j, k, &p)?;
                let (lg, sg) = ln_gamma_abs_sign(al * j as f64 + 1.0 - k as f64);
                let sign = if (k + j) % 2 == 1 { -1.0 } else { 1.0 };
                let closed = sign
                    * sg
                    * (al * j as f64 * lam.ln() + ln_gamma(al * j as f64 + 1.0)
                        - ln_gamma(k as f64 + 1.0)
                        - lg)
                        .exp();
                worst = worst.max((fd - closed).abs());
            }
        }
    }
    out.push(VerificationReport::residual(
        "higher-order",
        worst,
        1e-8,
        12,
        json!({"alpha": [0.3333333333333333, 0.4]}),
        "d^j/dt^j p_k(0;a,1) = (-1)^{k+j} l^{aj} G(aj+1)/(k! G(aj+1-k))",
    ));
    Ok(out)
}

/// Term-by-term m-th t-derivative of p_k(t; α, 1).
fn stf_beta1_term_derivative(k: usize, t: f64, alpha: f64, lambda: f64, m: usize) -> Result<f64> {
    // p_k = ((-1)^k/k!) Σ_r (-λ^α t)^r Γ(αr+1)/(Γ(r+1) Γ(αr+1-k))
    let x = lambda.powf(alpha);
    let ln_kfact = ln_gamma(k as f64 + 1.0);
    let mut sum = 0.0;
    for r in m..4000 {
        let rf = r as f64;
        let (lg, sg) = ln_gamma_abs_sign(alpha * rf + 1.0 - k as f64);
        if sg == 0.0 {
            continue;
        }
        // d^m/dt^m t^r = r!/(r-m)! t^{r-m}
        let ln_term = rf * x.ln() + (rf - m as f64) * t.ln() + ln_gamma(rf + 1.0)
            - ln_gamma(rf - m as f64 + 1.0)
            + ln_gamma(alpha * rf + 1.0)
            - ln_gamma(rf + 1.0)
            - lg
            - ln_kfact;
        let sign = if (r + k) % 2 == 1 { -1.0 } else { 1.0 };
        let term = sign * sg * ln_term.exp();
        sum += term;
        if r > 60 && term.abs() < 1e-18 {
            break;
        }
    }
    Ok(sum)
}

/// j-th derivative at 0⁺ by Richardson-extrapolated central differences.
fn initial_derivative_fd(j: usize, k: usize, p: &FracParams) -> Result<f64> {
    let f = |t: f64| -> Result<f64> {
        if t == 0.0 {
            return Ok(if k == 0 { 1.0 } else { 0.0 });
        }
        if t < 0.0 {
            // even extension is wrong; use the series directly at |t| since
            // p_k(t; α, 1) is analytic in t near 0
            return pmf_series_smallt(k, t, p);
        }
        pmf_stf(k, t, p)
    };
    let d = |h: f64| -> Result<f64> {
        Ok(match j {
            1 => (f(h)? - f(-h)?) / (2.0 * h),
            2 => (f(h)? - 2.0 * f(0.0)? + f(-h)?) / (h * h),
            _ => unreachable!("j <= 2 for the supported orders"),
        })
    };
    let h = 1e-2;
    let d1 = d(h)?;
    let d2 = d(h / 2.0)?;
    // central differences are O(h²): one Richardson level
    Ok((4.0 * d2 - d1) / 3.0)
}

/// Analytic continuation of the β = 1 series to small negative t (the
/// series is entire in t).
fn pmf_series_smallt(k: usize, t: f64, p: &FracParams) -> Result<f64> {
    let alpha = p.alpha.get();
    let x = p.lambda.powf(alpha);
    let ln_kfact = ln_gamma(k as f64 + 1.0);
    let mut sum = 0.0;
    for r in 0..400 {
        let rf = r as f64;
        let rg = rgamma(alpha * rf + 1.0 - k as f64);
        if rg == 0.0 {
            continue;
        }
        let coeff = (ln_gamma(alpha * rf + 1.0) - ln_gamma(rf + 1.0) - ln_kfact).exp();
        let sign = if k % 2 == 1 { -1.0 } else { 1.0 };
        sum += sign * coeff * rg * (-x * t).powi(r as i32) * if t < 0.0 { 1.0 } else { 1.0 };
        if r > 40 && coeff * (x * t.abs()).powi(r as i32) < 1e-18 {
            break;
        }
    }
    let _ = falling(alpha, 0);
    Ok(sum)
}
