//! Samplers for the drifted processes, waiting times, Lévy compositions and
//! the jump-time functional sum.

use rand::Rng;
use rand_distr::{Distribution, Exp, StandardNormal};

use super::clock::sample_clock;
use super::path::sample_waiting_time_path;
use super::stable::{sample_poisson_count, sample_unit_stable};
use super::ClockSpec;
use crate::error::{Error, Result};
use crate::laws::{FracParams, JumpLaw, LevySymbolSpec};
use serde::{Deserialize, Serialize};

/// Which drifted process to draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProcessKind {
    /// N(𝔉^{α,β}_t)
    NF,
    /// N(𝔉^{γ,β}_t) + a 𝔉^{α,β}_t with the shared inverse clock
    NFPlusDrift,
    /// N(t) + a t
    NPlusAt,
    /// N(t) + a 𝔄^α_t
    NPlusAA,
}

/// One draw of the selected process at time `t`.
pub fn sample_process<R: Rng>(p: &FracParams, t: f64, rng: &mut R, which: ProcessKind) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::Domain(format!("time must be >= 0, got {t}")));
    }
    let (al, be, ga, lam, a) = (p.alpha.get(), p.beta.get(), p.gamma.get(), p.lambda, p.a);
    Ok(match which {
        ProcessKind::NF => {
            let l = inverse_stable_draw(be, t, rng);
            let s = stable_draw(al, l, rng);
            sample_poisson_count(lam * s, rng)
        }
        ProcessKind::NFPlusDrift => {
            // one shared 𝔏^β feeds both subordinators (conditionally
            // independent branches)
            let l = inverse_stable_draw(be, t, rng);
            let sg = stable_draw(ga, l, rng);
            let sa = stable_draw(al, l, rng);
            sample_poisson_count(lam * sg, rng) + a * sa
        }
        ProcessKind::NPlusAt => sample_poisson_count(lam * t, rng) + a * t,
        ProcessKind::NPlusAA => {
            let sa = stable_draw(al, t, rng);
            sample_poisson_count(lam * t, rng) + a * sa
        }
    })
}

fn stable_draw<R: Rng>(alpha: f64, t: f64, rng: &mut R) -> f64 {
    if t <= 0.0 {
        0.0
    } else if alpha == 1.0 {
        t
    } else {
        t.powf(1.0 / alpha) * sample_unit_stable(alpha, rng)
    }
}

fn inverse_stable_draw<R: Rng>(beta: f64, t: f64, rng: &mut R) -> f64 {
    if t <= 0.0 {
        0.0
    } else if beta == 1.0 {
        t
    } else {
        (t / sample_unit_stable(beta, rng)).powf(beta)
    }
}

/// Sampling route for the waiting time of the k-th event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaitingMethod {
    /// Erlang(k, λ) pushed through the conjugate clock 𝔉^{β,α}.
    Composition,
    /// Grid-path inversion of the monotone time change.
    Path,
}

/// One draw of T_k, the k-th event time of N(𝔉^{α,β}).
pub fn sample_waiting_time<R: Rng>(
    k: usize,
    p: &FracParams,
    rng: &mut R,
    method: WaitingMethod,
) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("waiting time index starts at k = 1".into()));
    }
    match method {
        WaitingMethod::Composition => {
            let exp = Exp::new(p.lambda).map_err(|e| Error::Spec(format!("exp sampler: {e}")))?;
            let erlang: f64 = (0..k).map(|_| exp.sample(rng)).sum();
            // T_k = 𝔉^{β,α} evaluated at the base waiting time
            let (al, be) = (p.alpha.get(), p.beta.get());
            let l = inverse_stable_draw(al, erlang, rng);
            Ok(stable_draw(be, l, rng))
        }
        WaitingMethod::Path => sample_waiting_time_path(k, p, rng, 14),
    }
}

/// One draw of the Lévy process X at deterministic time `t`.
pub fn sample_levy<R: Rng>(spec: &LevySymbolSpec, t: f64, rng: &mut R) -> Result<f64> {
    spec.validate()?;
    if t < 0.0 {
        return Err(Error::Domain(format!("time must be >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    Ok(match *spec {
        LevySymbolSpec::Brownian { drift, diffusion } => {
            let z: f64 = StandardNormal.sample(rng);
            drift * t + (diffusion * t).sqrt() * z
        }
        LevySymbolSpec::CompoundPoisson { rate, jumps } => {
            let n = sample_poisson_count(rate * t, rng);
            sum_jumps(n, jumps, rng)?
        }
        LevySymbolSpec::StableSubordinator { alpha } => stable_draw(alpha, t, rng),
        LevySymbolSpec::PoissonSymbol { lambda } => sample_poisson_count(lambda * t, rng),
    })
}

/// Exact aggregate of `n` i.i.d. jumps.
fn sum_jumps<R: Rng>(n: f64, jumps: JumpLaw, rng: &mut R) -> Result<f64> {
    if n <= 0.0 {
        return Ok(0.0);
    }
    Ok(match jumps {
        JumpLaw::Unit => n,
        JumpLaw::Gaussian { mean, std } => {
            let z: f64 = StandardNormal.sample(rng);
            n * mean + std * n.sqrt() * z
        }
        JumpLaw::Exponential { rate } => {
            // Gamma(n, rate) is the exact law of the sum
            rand_distr::Gamma::new(n, 1.0 / rate)
                .map_err(|e| Error::Spec(format!("gamma sampler: {e}")))?
                .sample(rng)
        }
    })
}

/// Random time argument for a time-changed Lévy draw.
pub enum TimeChange<'a> {
    Clock(&'a ClockSpec),
    /// Hitting time of N(𝔄^γ)+b𝔄^β over the level carried by `t`.
    Hitting { params: &'a FracParams, refinements: u32, horizon: f64 },
}

/// One draw of X at a random time.
pub fn sample_levy_timechanged<R: Rng>(
    spec: &LevySymbolSpec,
    change: &TimeChange<'_>,
    t: f64,
    rng: &mut R,
) -> Result<f64> {
    let time = match change {
        TimeChange::Clock(c) => sample_clock(c, t, rng)?,
        TimeChange::Hitting { params, refinements, horizon } => {
            super::path::sample_hitting(t, params, rng, *refinements, *horizon)?
        }
    };
    sample_levy(spec, time, rng)
}

/// One joint draw of the jump-time functional sum identity:
/// lhs = Σ_{T_k ≤ t} 𝔄^β at the k-th arrival (independent copies),
/// rhs = one 𝔄^β draw at 𝔗_t = Σ_{T_k ≤ t} T_k, drawn independently.
pub fn sample_functional_sum<R: Rng>(t: f64, beta: f64, lambda: f64, rng: &mut R) -> Result<(f64, f64)> {
    if !(0.0 < beta && beta <= 1.0) {
        return Err(Error::Domain(format!("beta must lie in (0,1], got {beta}")));
    }
    let exp = Exp::new(lambda).map_err(|e| Error::Spec(format!("exp sampler: {e}")))?;
    let mut arrival: f64 = exp.sample(rng);
    let mut lhs = 0.0;
    let mut frak_t = 0.0;
    while arrival <= t {
        lhs += stable_draw(beta, arrival, rng);
        frak_t += arrival;
        arrival += exp.sample(rng);
    }
    let rhs = stable_draw(beta, frak_t, rng);
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::RngStream;
    use crate::specfun::mittag_leffler;

    #[test]
    fn plain_poisson_reduction() {
        let p = FracParams::new(1.0, 1.0, 1.0, 2.0, 0.0, 0.0).unwrap();
        let mut rng = RngStream::new(1, 0).rng();
        let n = 50_000;
        let mean = (0..n)
            .map(|_| sample_process(&p, 1.5, &mut rng, ProcessKind::NF).unwrap())
            .sum::<f64>()
            / n as f64;
        let mu = 3.0;
        assert!((mean - mu).abs() < 4.0 * (mu / n as f64).sqrt());
    }

    #[test]
    fn drift_lattice_fractional_parts() {
        // fractional parts of N(t)+at are all ≡ at mod 1
        let p = FracParams::new(1.0, 1.0, 1.0, 1.0, 0.7, 0.0).unwrap();
        let t = 1.3;
        let expect = (0.7 * t) % 1.0;
        let mut rng = RngStream::new(4, 0).rng();
        for _ in 0..1000 {
            let v = sample_process(&p, t, &mut rng, ProcessKind::NPlusAt).unwrap();
            let frac = v % 1.0;
            assert!((frac - expect).abs() < 1e-12 || (frac - expect).abs() > 1.0 - 1e-12);
        }
    }

    #[test]
    fn drifted_process_laplace_transform() {
        // 𝔼 e^{-ξ(N(𝔉^{γ,β})+a𝔉^{α,β})} = E_β(-t^β a^α ξ^α - t^β λ^γ (1-e^{-ξ})^γ)
        let p = FracParams::new(0.7, 0.8, 0.6, 1.0, 1.0, 0.0).unwrap();
        let t = 1.0;
        let n = 100_000;
        let mut rng = RngStream::new(88, 0).rng();
        let draws: Vec<f64> = (0..n)
            .map(|_| sample_process(&p, t, &mut rng, ProcessKind::NFPlusDrift).unwrap())
            .collect();
        for &xi in &[0.5_f64, 1.0] {
            let vals: Vec<f64> = draws.iter().map(|&x| (-xi * x).exp()).collect();
            let mean = vals.iter().sum::<f64>() / n as f64;
            let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n as f64 - 1.0);
            let se = (var / n as f64).sqrt();
            let arg = -t.powf(0.8) * (xi.powf(0.7) + (1.0 - (-xi).exp()).powf(0.6));
            let expect = mittag_leffler(0.8, 1.0, arg).unwrap().value;
            assert!(
                (mean - expect).abs() <= 4.0 * se,
                "xi={xi}: {mean} vs {expect} (se={se})"
            );
        }
    }

    #[test]
    fn waiting_time_erlang_reduction() {
        let p = FracParams::new(1.0, 1.0, 1.0, 1.0, 0.0, 0.0).unwrap();
        let mut rng = RngStream::new(12, 0).rng();
        let n = 50_000;
        let k = 3;
        let mean = (0..n)
            .map(|_| sample_waiting_time(k, &p, &mut rng, WaitingMethod::Composition).unwrap())
            .sum::<f64>()
            / n as f64;
        assert!((mean - 3.0).abs() < 4.0 * (3.0_f64 / n as f64).sqrt());
    }

    #[test]
    fn functional_sum_no_jumps() {
        let mut rng = RngStream::new(3, 0).rng();
        // tiny horizon: almost surely no jumps
        let (l, r) = sample_functional_sum(1e-9, 0.6, 1.0, &mut rng).unwrap();
        assert_eq!((l, r), (0.0, 0.0));
    }

    #[test]
    fn functional_sum_identity_order_one() {
        // β = 1: both sides equal 𝔗_t sample-by-sample
        let mut rng = RngStream::new(31, 0).rng();
        for _ in 0..200 {
            let (l, r) = sample_functional_sum(2.0, 1.0, 2.0, &mut rng).unwrap();
            assert!((l - r).abs() < 1e-12);
        }
    }

    #[test]
    fn brownian_char_fn_against_symbol() {
        use crate::laws::compose_phi;
        let spec = LevySymbolSpec::Brownian { drift: 0.0, diffusion: 1.0 };
        let clock = ClockSpec::SharedInverse {
            beta: 1.0,
            branches: vec![
                ClockSpec::PoissonClock { lambda: 1.0 },
                ClockSpec::Affine { scale: 1.0, drift: 0.0 },
            ],
        };
        let t = 1.0;
        let n = 100_000;
        let mut rng = RngStream::new(777, 0).rng();
        let draws: Vec<f64> = (0..n)
            .map(|_| sample_levy_timechanged(&spec, &TimeChange::Clock(&clock), t, &mut rng).unwrap())
            .collect();
        for &xi in &[0.5_f64, 1.0] {
            let re: Vec<f64> = draws.iter().map(|&x| (xi * x).cos()).collect();
            let im: Vec<f64> = draws.iter().map(|&x| (xi * x).sin()).collect();
            let mean = |v: &[f64]| v.iter().sum::<f64>() / n as f64;
            let sem = |v: &[f64], m: f64| {
                (v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n as f64 - 1.0) / n as f64).sqrt()
            };
            let (mr, mi) = (mean(&re), mean(&im));
            let expect = (-t * compose_phi(&spec, xi, 1.0, 1.0)).exp();
            let (sr, si) = (sem(&re, mr), sem(&im, mi));
            assert!((mr - expect.re).abs() <= 4.0 * sr, "re at xi={xi}: {mr} vs {}", expect.re);
            assert!((mi - expect.im).abs() <= 4.0 * si, "im at xi={xi}: {mi} vs {}", expect.im);
        }
    }

    #[test]
    fn identity_clock_levy_is_plain() {
        let spec = LevySymbolSpec::PoissonSymbol { lambda: 1.0 };
        let clock = ClockSpec::Affine { scale: 1.0, drift: 0.0 };
        let mut r1 = RngStream::new(6, 0).rng();
        let mut r2 = RngStream::new(6, 0).rng();
        for _ in 0..100 {
            let a = sample_levy_timechanged(&spec, &TimeChange::Clock(&clock), 2.0, &mut r1).unwrap();
            let b = sample_levy(&spec, 2.0, &mut r2).unwrap();
            assert_eq!(a, b);
        }
    }
}
