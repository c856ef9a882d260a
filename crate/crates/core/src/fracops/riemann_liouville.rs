//! Riemann-Liouville derivatives: left-from-0 Grünwald–Letnikov and the
//! right-sided (d/d(-t))^ν variant of order ν ∈ (1, 3].

use super::SampledFn;
use crate::error::{Error, Result};
use crate::specfun::gamma::gamma;
use crate::specfun::FracOrder;

/// Left Riemann-Liouville derivative ∂^α_x via the Grünwald–Letnikov weights.
///
/// First-order accurate for functions vanishing at 0; reproduces the
/// x^{-α}/Γ(1-α) singular part for a constant sample. Requires the grid to
/// start at 0.
pub fn rl_derivative_left0(f: &SampledFn, alpha: FracOrder) -> Result<SampledFn> {
    let a = alpha.get();
    let g = f.grid;
    if g.start != 0.0 {
        return Err(Error::Grid(format!(
            "rl_derivative_left0 expects the grid to start at 0, got {}",
            g.start
        )));
    }
    let n = g.count;
    let ha = g.step.powf(-a);
    // w_j = (-1)^j C(α, j), by the ratio recurrence
    let mut w = Vec::with_capacity(n);
    w.push(1.0_f64);
    for j in 1..n {
        let prev = w[j - 1];
        w.push(prev * ((j as f64 - 1.0 - a) / j as f64));
    }
    let mut out = vec![0.0; n];
    for i in 0..n {
        let mut acc = 0.0;
        for j in 0..=i {
            acc += w[j] * f.values[i - j];
        }
        out[i] = ha * acc;
    }
    SampledFn::new(g, out)
}

/// Right-sided Riemann-Liouville derivative (d/d(-t))^ν, ν ∈ (1, 3].
///
/// Computed as (-d/dt)^m of the right fractional integral of order m - ν
/// (m = ⌈ν⌉), with the integral taken over the sampled tail under a
/// piecewise-linear interpolant. Integer ν collapses to plain (-d/dt)^ν
/// central differences. The operand must decay at the right end: if the
/// last 10% of the grid exceeds `1e-8` of the sup norm a `Tail` error is
/// returned, since the truncated tail would pollute every node.
pub fn rl_derivative_rightsided(f: &SampledFn, nu: f64) -> Result<SampledFn> {
    if !(1.0 < nu && nu <= 3.0) {
        return Err(Error::Domain(format!("rl_derivative_rightsided needs nu in (1,3], got {nu}")));
    }
    let g = f.grid;
    let n = g.count;
    if n < 8 {
        return Err(Error::Grid("need at least 8 samples".into()));
    }
    let sup = f.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let tail_start = n - (n / 10).max(1);
    let tail_max = f.values[tail_start..].iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if sup > 0.0 && tail_max > 1e-8 * sup {
        return Err(Error::Tail(format!(
            "relative tail magnitude {:.3e} exceeds 1e-8",
            tail_max / sup
        )));
    }

    let m = nu.ceil() as usize;
    let integer_order = (nu - nu.round()).abs() < 1e-12;
    let base: Vec<f64> = if integer_order {
        f.values.clone()
    } else {
        right_frac_integral(f, m as f64 - nu)
    };
    // (-d/dt)^m by central differences
    let h = g.step;
    let mut out = vec![0.0; n];
    match m {
        2 => {
            for i in 1..n - 1 {
                out[i] = (base[i - 1] - 2.0 * base[i] + base[i + 1]) / (h * h);
            }
            out[0] = out[1];
            out[n - 1] = out[n - 2];
        }
        3 => {
            // (-d/dt)^3 = -d^3/dt^3
            for i in 2..n - 2 {
                let d3 = (base[i + 2] - 2.0 * base[i + 1] + 2.0 * base[i - 1] - base[i - 2])
                    / (2.0 * h * h * h);
                out[i] = -d3;
            }
            out[0] = out[2];
            out[1] = out[2];
            out[n - 1] = out[n - 3];
            out[n - 2] = out[n - 3];
        }
        _ => unreachable!("m is 2 or 3 for nu in (1,3]"),
    }
    SampledFn::new(g, out)
}

/// Right fractional integral (1/Γ(μ)) ∫_t^T f(s) (s-t)^{μ-1} ds on the grid,
/// exact for the piecewise-linear interpolant of the samples.
fn right_frac_integral(f: &SampledFn, mu: f64) -> Vec<f64> {
    let g = f.grid;
    let n = g.count;
    let h = g.step;
    let c = 1.0 / gamma(mu);
    let mut out = vec![0.0; n];
    // Precompute segment moments relative to the left node of each offset:
    // for s in [kh, (k+1)h]: ∫ (s - t)^{μ-1} ds and ∫ (s - t)^{μ-1}(s - kh) ds
    // with t the evaluation node, k counted from t.
    let mut p0 = vec![0.0; n + 1]; // ((k h)^μ)/μ
    for (k, v) in p0.iter_mut().enumerate() {
        *v = (k as f64 * h).powf(mu) / mu;
    }
    let mut p1 = vec![0.0; n + 1]; // ((k h)^{μ+1})/(μ+1)
    for (k, v) in p1.iter_mut().enumerate() {
        *v = (k as f64 * h).powf(mu + 1.0) / (mu + 1.0);
    }
    for i in 0..n {
        let mut acc = 0.0;
        for k in 0..(n - 1 - i) {
            let fl = f.values[i + k];
            let fr = f.values[i + k + 1];
            let m0 = p0[k + 1] - p0[k];
            let m1 = p1[k + 1] - p1[k] - (k as f64 * h) * m0;
            let slope = (fr - fl) / h;
            acc += fl * m0 + slope * m1;
        }
        out[i] = c * acc;
    }
    out
}
