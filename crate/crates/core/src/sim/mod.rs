//! Seeded Monte Carlo samplers for every random object in the crate:
//! stable subordinators and their inverses, composed clocks, the drifted
//! Poisson processes, hitting times and Lévy compositions.
//!
//! Determinism contract: (seed, stream_id) fully determines every draw;
//! batches are partitioned into fixed-size chunks with stream_id equal to
//! the chunk index, so results do not depend on the number of worker
//! threads.

mod clock;
mod path;
mod process;
mod stable;

pub use clock::sample_clock;
pub use path::{sample_hitting, sample_waiting_time_path, SubordinatorPath};
pub use process::{
    sample_functional_sum, sample_levy, sample_levy_timechanged, sample_process,
    sample_waiting_time, ProcessKind, TimeChange, WaitingMethod,
};
pub use stable::{sample_poisson_count, sample_unit_stable};

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fracops::PsiSpec;

/// Seed plus stream index; the pair fully determines a sample sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    #[serde(default)]
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        RngStream { seed, stream_id }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// Composition tree describing a random time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum ClockSpec {
    /// 𝔄^α_t; α = 1 degenerates to the identity map.
    StableSub { alpha: f64 },
    /// 𝔏^β_t, the first passage of 𝔄^β over t.
    InverseStable { beta: f64 },
    /// A subordinator from the Bernstein catalog.
    GeneralSub { psi: PsiSpec },
    /// Poisson counting clock N(λt).
    PoissonClock { lambda: f64 },
    /// Deterministic clock scale·t + drift.
    Affine { scale: f64, drift: f64 },
    /// outer evaluated at the inner clock's value.
    Compose { outer: Box<ClockSpec>, inner: Box<ClockSpec> },
    /// One shared 𝔏^β_t feeds every branch; branch values are summed.
    SharedInverse { beta: f64, branches: Vec<ClockSpec> },
}

impl ClockSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            ClockSpec::StableSub { alpha } => order_in_unit("alpha", *alpha),
            ClockSpec::InverseStable { beta } => order_in_unit("beta", *beta),
            ClockSpec::GeneralSub { psi } => psi.validate(),
            ClockSpec::PoissonClock { lambda } => {
                if !(*lambda > 0.0) {
                    return Err(Error::Spec(format!("poisson clock needs lambda > 0, got {lambda}")));
                }
                Ok(())
            }
            ClockSpec::Affine { scale, drift } => {
                if *scale < 0.0 || *drift < 0.0 {
                    return Err(Error::Spec(
                        "affine clock needs scale >= 0 and drift >= 0 to stay nondecreasing".into(),
                    ));
                }
                Ok(())
            }
            ClockSpec::Compose { outer, inner } => {
                outer.validate()?;
                inner.validate()
            }
            ClockSpec::SharedInverse { beta, branches } => {
                order_in_unit("beta", *beta)?;
                if branches.is_empty() {
                    return Err(Error::Spec("shared inverse needs at least one branch".into()));
                }
                for b in branches {
                    b.validate()?;
                }
                Ok(())
            }
        }
    }
}

fn order_in_unit(name: &str, v: f64) -> Result<()> {
    if !(0.0 < v && v <= 1.0) {
        return Err(Error::Spec(format!("{name} must lie in (0,1], got {v}")));
    }
    Ok(())
}

/// Seeded Monte Carlo batch with provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleBatch {
    pub values: Vec<f64>,
    pub params: serde_json::Value,
    pub t: f64,
    pub rng: RngStream,
    pub n: usize,
}

/// Chunk size of the deterministic batch partition (stream_id = chunk index).
pub const BATCH_CHUNK: usize = 4096;

/// Draw `n` samples with the fixed chunk partition; the output is
/// independent of the worker-thread count.
pub fn sample_batch<F>(n: usize, seed: u64, sampler: F) -> Vec<f64>
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync + Send,
{
    let chunks = n.div_ceil(BATCH_CHUNK);
    (0..chunks)
        .into_par_iter()
        .flat_map_iter(|chunk| {
            let mut rng = RngStream::new(seed, chunk as u64).rng();
            let take = BATCH_CHUNK.min(n - chunk * BATCH_CHUNK);
            let mut out = Vec::with_capacity(take);
            for _ in 0..take {
                out.push(sampler(&mut rng));
            }
            out
        })
        .collect()
}

/// Faillible batch variant for samplers that can hit their horizon.
pub fn try_sample_batch<F>(n: usize, seed: u64, sampler: F) -> (Vec<f64>, usize)
where
    F: Fn(&mut ChaCha8Rng) -> Result<f64> + Sync + Send,
{
    let chunks = n.div_ceil(BATCH_CHUNK);
    let parts: Vec<(Vec<f64>, usize)> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = RngStream::new(seed, chunk as u64).rng();
            let take = BATCH_CHUNK.min(n - chunk * BATCH_CHUNK);
            let mut vals = Vec::with_capacity(take);
            let mut failures = 0usize;
            for _ in 0..take {
                match sampler(&mut rng) {
                    Ok(v) => vals.push(v),
                    Err(_) => failures += 1,
                }
            }
            (vals, failures)
        })
        .collect();
    let mut values = Vec::with_capacity(n);
    let mut failures = 0;
    for (v, f) in parts {
        values.extend(v);
        failures += f;
    }
    (values, failures)
}
