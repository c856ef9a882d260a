//! Goodness-of-fit statistics: Kolmogorov-Smirnov (one- and two-sample),
//! chi-square with small-bin pooling, and the two-proportion z test.

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Survival function of the Kolmogorov distribution,
/// Q(x) = 2 Σ_{j>=1} (-1)^{j-1} e^{-2 j² x²}.
pub fn kolmogorov_sf(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let mut sum = 0.0;
    for j in 1..=100 {
        let jf = j as f64;
        let term = (-2.0 * jf * jf * x * x).exp();
        sum += if j % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

/// Two-sample KS statistic and asymptotic p-value (Stephens correction).
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> (f64, f64) {
    let a = sorted(a.to_vec());
    let b = sorted(b.to_vec());
    let (n1, n2) = (a.len(), b.len());
    let mut i = 0;
    let mut j = 0;
    let mut d = 0.0_f64;
    while i < n1 && j < n2 {
        let x = if a[i] <= b[j] { a[i] } else { b[j] };
        while i < n1 && a[i] <= x {
            i += 1;
        }
        while j < n2 && b[j] <= x {
            j += 1;
        }
        let diff = (i as f64 / n1 as f64 - j as f64 / n2 as f64).abs();
        d = d.max(diff);
    }
    let ne = (n1 as f64 * n2 as f64) / (n1 as f64 + n2 as f64);
    let x = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    (d, kolmogorov_sf(x))
}

/// One-sample KS against an analytic CDF.
pub fn ks_one_sample(samples: &[f64], cdf: impl Fn(f64) -> f64) -> (f64, f64) {
    let a = sorted(samples.to_vec());
    let n = a.len() as f64;
    let mut d = 0.0_f64;
    for (i, &x) in a.iter().enumerate() {
        let c = cdf(x);
        d = d.max((c - i as f64 / n).abs()).max(((i as f64 + 1.0) / n - c).abs());
    }
    let x = (n.sqrt() + 0.12 + 0.11 / n.sqrt()) * d;
    (d, kolmogorov_sf(x))
}

/// Pearson chi-square against model probabilities; bins with expected count
/// below 5 are pooled from the right. `probs` should include every bin the
/// observation can land in (the last entry acting as the tail bin).
pub fn chi_square_gof(observed: &[u64], probs: &[f64]) -> (f64, f64, usize) {
    assert_eq!(observed.len(), probs.len());
    let n: f64 = observed.iter().map(|&c| c as f64).sum();
    // pool from the right until expected >= 5
    let mut obs: Vec<f64> = Vec::new();
    let mut exp: Vec<f64> = Vec::new();
    let mut acc_o = 0.0;
    let mut acc_e = 0.0;
    for i in (0..probs.len()).rev() {
        acc_o += observed[i] as f64;
        acc_e += probs[i] * n;
        if acc_e >= 5.0 {
            obs.push(acc_o);
            exp.push(acc_e);
            acc_o = 0.0;
            acc_e = 0.0;
        }
    }
    if acc_e > 0.0 {
        if let (Some(o), Some(e)) = (obs.last_mut(), exp.last_mut()) {
            *o += acc_o;
            *e += acc_e;
        }
    }
    let mut stat = 0.0;
    for (o, e) in obs.iter().zip(exp.iter()) {
        stat += (o - e) * (o - e) / e;
    }
    let dof = obs.len().saturating_sub(1).max(1);
    let p = 1.0 - ChiSquared::new(dof as f64).unwrap().cdf(stat);
    (stat, p, dof)
}

/// |p̂₁ - p̂₂| in units of the combined standard error.
pub fn two_proportion_sigma(p1: f64, n1: usize, p2: f64, n2: usize) -> f64 {
    let v1 = p1 * (1.0 - p1) / n1 as f64;
    let v2 = p2 * (1.0 - p2) / n2 as f64;
    (p1 - p2).abs() / (v1 + v2).sqrt().max(1e-12)
}
