//! Machine-checkable verification of the transform identities, governing
//! equations and equalities in distribution implemented by this crate.
//!
//! Every check produces [`VerificationReport`] records (JSON-serializable)
//! and is deterministic given its seed. The registry splits into a `fast`
//! suite (analytic / quadrature) and an `mc` suite (sampling).

mod checks_mc;
mod checks_pde;
mod checks_transforms;
pub mod stats;

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Outcome of one named identity check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_id: String,
    /// Measured statistic: residual norm, max deviation, p-value or sigma
    /// distance depending on the check kind.
    pub statistic: f64,
    pub threshold: f64,
    pub passed: bool,
    pub n: u64,
    pub params: serde_json::Value,
    /// The identity under test, written out.
    pub anchor: String,
}

impl VerificationReport {
    /// Pass when the statistic stays at or below the threshold.
    pub fn residual(
        check_id: impl Into<String>,
        statistic: f64,
        threshold: f64,
        n: u64,
        params: serde_json::Value,
        anchor: impl Into<String>,
    ) -> Self {
        VerificationReport {
            check_id: check_id.into(),
            statistic,
            threshold,
            passed: statistic.is_finite() && statistic <= threshold,
            n,
            params,
            anchor: anchor.into(),
        }
    }

    /// Pass when the p-value stays at or above the floor.
    pub fn pvalue(
        check_id: impl Into<String>,
        p: f64,
        floor: f64,
        n: u64,
        params: serde_json::Value,
        anchor: impl Into<String>,
    ) -> Self {
        VerificationReport {
            check_id: check_id.into(),
            statistic: p,
            threshold: floor,
            passed: p.is_finite() && p >= floor,
            n,
            params,
            anchor: anchor.into(),
        }
    }
}

/// Which suite a check belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Fast,
    Mc,
}

/// A named, runnable check.
pub struct CheckDef {
    pub id: &'static str,
    pub suite: Suite,
    pub run: fn(u64) -> Result<Vec<VerificationReport>>,
}

/// Every check in the crate.
pub fn registry() -> Vec<CheckDef> {
    vec![
        CheckDef { id: "ml-special-values", suite: Suite::Fast, run: checks_transforms::check_ml_special_values },
        CheckDef { id: "laplace-identities", suite: Suite::Fast, run: checks_transforms::check_laplace_identities },
        CheckDef { id: "pmf-consistency", suite: Suite::Fast, run: checks_transforms::check_pmf_consistency },
        CheckDef { id: "double-laplace", suite: Suite::Fast, run: checks_transforms::check_double_laplace_suite },
        CheckDef { id: "hitting-boundary", suite: Suite::Fast, run: checks_transforms::check_hitting_boundary },
        CheckDef { id: "eigen-dertf", suite: Suite::Fast, run: checks_transforms::check_eigen_and_dertf },
        CheckDef { id: "transport-laplace", suite: Suite::Fast, run: checks_pde::check_transport_laplace },
        CheckDef { id: "caputo-eigen", suite: Suite::Fast, run: checks_pde::check_caputo_eigen },
        CheckDef { id: "pde-stf", suite: Suite::Fast, run: checks_pde::check_pde_stf },
        CheckDef { id: "clock-pde", suite: Suite::Fast, run: checks_pde::check_clock_pde },
        CheckDef { id: "higher-order", suite: Suite::Fast, run: checks_pde::check_higher_order },
        CheckDef { id: "mc-pmf", suite: Suite::Mc, run: checks_mc::check_mc_pmf },
        CheckDef { id: "mc-random-drift", suite: Suite::Mc, run: checks_mc::check_mc_random_drift },
        CheckDef { id: "mc-general-sub", suite: Suite::Mc, run: checks_mc::check_mc_general_sub },
        CheckDef { id: "dist-waiting", suite: Suite::Mc, run: checks_mc::check_dist_waiting },
        CheckDef { id: "dist-functional-sum", suite: Suite::Mc, run: checks_mc::check_dist_functional_sum },
        CheckDef { id: "dist-levy-decomposition", suite: Suite::Mc, run: checks_mc::check_dist_levy_decomposition },
        CheckDef { id: "dist-clock-hitting", suite: Suite::Mc, run: checks_mc::check_dist_clock_hitting },
        CheckDef { id: "hitting-mc", suite: Suite::Mc, run: checks_mc::check_hitting_mc },
        CheckDef { id: "levy-symbols", suite: Suite::Mc, run: checks_mc::check_levy_symbols },
    ]
}

/// Run the selected checks. `suite` of `None` means all suites; the filter
/// keeps checks whose id contains the substring.
pub fn run_suite(
    suite: Option<Suite>,
    filter: Option<&str>,
    seed: u64,
) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for def in registry() {
        if let Some(s) = suite {
            if def.suite != s {
                continue;
            }
        }
        if let Some(f) = filter {
            if !def.id.contains(f) {
                continue;
            }
        }
        out.extend((def.run)(seed)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_ids_unique() {
        let mut ids: Vec<_> = registry().iter().map(|d| d.id).collect();
        ids.sort();
        let before = ids.len();
        ids.dedup();
        assert_eq!(before, ids.len());
    }

    #[test]
    fn report_semantics() {
        let r = VerificationReport::residual("x", 0.5, 1.0, 0, serde_json::json!({}), "a <= b");
        assert!(r.passed);
        let r = VerificationReport::pvalue("x", 0.0005, 0.001, 0, serde_json::json!({}), "p");
        assert!(!r.passed);
    }
}
