//! Single-marginal clock sampling through self-similar reductions:
//! 𝔄^α_t = t^{1/α} S_α in law, 𝔏^β_t = (t/S_β)^β in law; compositions draw
//! the inner clock and feed the outer one.

use rand::Rng;
use rand_distr::{Distribution, Gamma};

use super::stable::{sample_poisson_count, sample_unit_stable};
use super::ClockSpec;
use crate::error::{Error, Result};
use crate::fracops::PsiSpec;

/// One draw of the clock value at time `t`.
pub fn sample_clock<R: Rng>(spec: &ClockSpec, t: f64, rng: &mut R) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::Domain(format!("clock time must be >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    Ok(match spec {
        ClockSpec::StableSub { alpha } => {
            if *alpha == 1.0 {
                t // identity subordinator
            } else {
                t.powf(1.0 / alpha) * sample_unit_stable(*alpha, rng)
            }
        }
        ClockSpec::InverseStable { beta } => {
            if *beta == 1.0 {
                t
            } else {
                (t / sample_unit_stable(*beta, rng)).powf(*beta)
            }
        }
        ClockSpec::GeneralSub { psi } => sample_general_sub(psi, t, rng)?,
        ClockSpec::PoissonClock { lambda } => sample_poisson_count(lambda * t, rng),
        ClockSpec::Affine { scale, drift } => scale * t + drift,
        ClockSpec::Compose { outer, inner } => {
            let s = sample_clock(inner, t, rng)?;
            sample_clock(outer, s, rng)?
        }
        ClockSpec::SharedInverse { beta, branches } => {
            let l = if *beta == 1.0 { t } else { (t / sample_unit_stable(*beta, rng)).powf(*beta) };
            let mut acc = 0.0;
            for b in branches {
                acc += sample_clock(b, l, rng)?;
            }
            acc
        }
    })
}

/// Subordinator draw for the Bernstein catalog at time `t`.
fn sample_general_sub<R: Rng>(psi: &PsiSpec, t: f64, rng: &mut R) -> Result<f64> {
    match *psi {
        PsiSpec::Stable { alpha } => Ok(if alpha == 1.0 {
            t
        } else {
            t.powf(1.0 / alpha) * sample_unit_stable(alpha, rng)
        }),
        PsiSpec::TemperedStable { alpha, theta } => {
            // rejection: propose stable, accept with e^{-θx};
            // acceptance rate e^{-tθ^α}
            if t * theta.powf(alpha) > 30.0 {
                return Err(Error::Spec(format!(
                    "tempered-stable rejection sampling infeasible at t·θ^α = {}",
                    t * theta.powf(alpha)
                )));
            }
            for _ in 0..10_000_000 {
                let x = t.powf(1.0 / alpha) * sample_unit_stable(alpha, rng);
                let u: f64 = rng.gen_range(0.0..1.0);
                if u < (-theta * x).exp() {
                    return Ok(x);
                }
            }
            Err(Error::NonConvergent("tempered-stable rejection loop ran away".into()))
        }
        PsiSpec::Gamma { theta } => {
            // 𝔼 e^{-ξD_t} = (θ/(θ+ξ))^t: Gamma(shape = t, rate = θ)
            Ok(Gamma::new(t, 1.0 / theta)
                .map_err(|e| Error::Spec(format!("gamma sampler: {e}")))?
                .sample(rng))
        }
    }
}
