//! Path-based sampling: stable-subordinator paths on a uniform grid with
//! independent increments, the hitting time of the drifted jump process,
//! and the path route to the waiting time.

use rand::Rng;
use rand_distr::{Distribution, Exp};

use super::stable::sample_unit_stable;
use crate::error::{Error, Result};
use crate::laws::FracParams;

/// Stable-subordinator path sampled by independent increments on a uniform
/// grid: each step adds h^{1/α}·S. Degenerate α = 1 walks the identity.
pub struct SubordinatorPath {
    alpha: f64,
    step: f64,
    value: f64,
    time: f64,
}

impl SubordinatorPath {
    pub fn new(alpha: f64, step: f64) -> Result<Self> {
        if !(0.0 < alpha && alpha <= 1.0) {
            return Err(Error::Spec(format!("path order must lie in (0,1], got {alpha}")));
        }
        if !(step > 0.0) {
            return Err(Error::Spec(format!("path step must be > 0, got {step}")));
        }
        Ok(SubordinatorPath { alpha, step, value: 0.0, time: 0.0 })
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// Advance one grid step, returning the new value.
    pub fn advance<R: Rng>(&mut self, rng: &mut R) -> f64 {
        let inc = if self.alpha == 1.0 {
            self.step
        } else {
            self.step.powf(1.0 / self.alpha) * sample_unit_stable(self.alpha, rng)
        };
        self.value += inc;
        self.time += self.step;
        self.value
    }

    /// Walk until the path value reaches `level`; returns the bracket
    /// midpoint of the crossing time, or a horizon error.
    pub fn first_passage<R: Rng>(&mut self, level: f64, horizon: f64, rng: &mut R) -> Result<f64> {
        while self.value < level {
            if self.time >= horizon {
                return Err(Error::Horizon(format!(
                    "no crossing of level {level} by time {horizon}"
                )));
            }
            self.advance(rng);
        }
        Ok((self.time - 0.5 * self.step).max(0.0))
    }
}

/// First exit time of N(𝔄^γ_s) + b𝔄^β_s from (0, t).
///
/// The two subordinators advance on a shared grid of step
/// `horizon · 2^{-refinements}`; the Poisson count is evaluated against its
/// exact arrival times in the 𝔄^γ scale, so the only bias is the grid
/// bracket (conservative for nondecreasing paths). Returns the bracket
/// midpoint.
pub fn sample_hitting<R: Rng>(
    t: f64,
    p: &FracParams,
    rng: &mut R,
    refinements: u32,
    horizon: f64,
) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("hitting level must be > 0, got {t}")));
    }
    let step = horizon * 0.5_f64.powi(refinements as i32);
    let (ga, be, b, lam) = (p.gamma.get(), p.beta.get(), p.b, p.lambda);
    let exp = Exp::new(lam).map_err(|e| Error::Spec(format!("exp sampler: {e}")))?;

    let mut a_gamma = SubordinatorPath::new(ga, step)?;
    let mut a_beta = SubordinatorPath::new(be, step)?;
    let mut count = 0.0_f64;
    let mut next_arrival: f64 = exp.sample(rng);
    let mut s = 0.0;
    loop {
        if s >= horizon {
            return Err(Error::Horizon(format!(
                "drifted jump path stayed below {t} up to {horizon}"
            )));
        }
        let ag = a_gamma.advance(rng);
        let ab = a_beta.advance(rng);
        s += step;
        while next_arrival <= ag {
            count += 1.0;
            next_arrival += exp.sample(rng);
        }
        if count + b * ab >= t {
            return Ok((s - 0.5 * step).max(0.0));
        }
    }
}

/// Path route to the waiting time of the k-th event of N(𝔉^{α,β}):
/// the k-th Poisson arrival is traced back through a simulated 𝔄^α path
/// (first passage) and then through a simulated 𝔄^β path segment.
pub fn sample_waiting_time_path<R: Rng>(
    k: usize,
    p: &FracParams,
    rng: &mut R,
    refinements: u32,
) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("waiting time index starts at k = 1".into()));
    }
    let (al, be, lam) = (p.alpha.get(), p.beta.get(), p.lambda);
    let exp = Exp::new(lam).map_err(|e| Error::Spec(format!("exp sampler: {e}")))?;
    let tau: f64 = (0..k).map(|_| exp.sample(rng)).sum();
    // first passage of 𝔄^α over the k-th arrival level
    let horizon1 = 16.0 * (1.0 + tau.powf(al));
    let step1 = horizon1 * 0.5_f64.powi(refinements as i32);
    let mut a_alpha = SubordinatorPath::new(al, step1)?;
    let h = a_alpha.first_passage(tau, horizon1, rng)?;
    // value of 𝔄^β at that passage time, accumulated along a grid path
    if h == 0.0 {
        return Ok(0.0);
    }
    let steps = 1usize << refinements.min(22);
    let mut a_beta = SubordinatorPath::new(be, h / steps as f64)?;
    for _ in 0..steps {
        a_beta.advance(rng);
    }
    Ok(a_beta.value())
}
