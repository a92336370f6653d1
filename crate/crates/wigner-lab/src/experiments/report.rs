//! Report assembly: per-trial records, per-component summaries, and the
//! overall pass verdict.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::experiments::{ExperimentConfig, ExperimentError};
use crate::stats::{summarize, ReferenceLaw, Summary};

/// One recorded statistic of one trial.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub component: String,
    pub value: f64,
}

/// Outcome of a single trial before aggregation.
#[derive(Debug, Clone)]
pub(crate) struct TrialOutcome {
    /// `(component, value)` pairs in emission order.
    pub records: Vec<(String, f64)>,
    pub pass: bool,
    pub warnings: Vec<String>,
}

/// Aggregated experiment result. `samples` keeps the raw per-trial values in
/// trial order; `summaries` maps each component to its statistics; `primary`
/// names the component behind `pass_fraction`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub trials: u64,
    pub primary: String,
    /// Fraction of trials satisfying the B-scaled bound.
    pub pass_fraction: f64,
    /// Overall verdict: `pass_fraction` meets its target and every
    /// threshold-carrying KS check passes.
    pub pass: bool,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, f64>,
    pub summaries: BTreeMap<String, Summary>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    pub samples: Vec<TrialRecord>,
}

impl ExperimentReport {
    /// Summary of the primary component.
    pub fn summary(&self) -> &Summary {
        &self.summaries[&self.primary]
    }

    /// Values of one component in trial order.
    pub fn component_values(&self, component: &str) -> Vec<f64> {
        self.samples
            .iter()
            .filter(|r| r.component == component)
            .map(|r| r.value)
            .collect()
    }
}

/// Assemble the report from per-trial outcomes.
///
/// `references` attaches KS comparisons (with optional thresholds) to named
/// components. Warnings are deduplicated preserving first-appearance order.
pub(crate) fn assemble_report(
    experiment: &str,
    cfg: &ExperimentConfig,
    outcomes: Vec<TrialOutcome>,
    primary: &str,
    references: BTreeMap<String, Vec<(ReferenceLaw, Option<f64>)>>,
    mut metadata: BTreeMap<String, f64>,
    mut warnings: Vec<String>,
) -> Result<ExperimentReport, ExperimentError> {
    let trials = outcomes.len() as u64;
    let mut samples = Vec::new();
    let mut columns: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    let mut passed = 0u64;
    for (trial, outcome) in outcomes.into_iter().enumerate() {
        if outcome.pass {
            passed += 1;
        }
        for w in outcome.warnings {
            warnings.push(w);
        }
        for (component, value) in outcome.records {
            columns.entry(component.clone()).or_default().push(value);
            samples.push(TrialRecord {
                trial: trial as u64,
                component,
                value,
            });
        }
    }
    let mut summaries = BTreeMap::new();
    let empty = Vec::new();
    for (component, values) in &columns {
        let refs = references.get(component).unwrap_or(&empty);
        summaries.insert(component.clone(), summarize(values, refs)?);
    }
    let pass_fraction = if trials == 0 {
        0.0
    } else {
        passed as f64 / trials as f64
    };
    let ks_ok = summaries.values().all(|s| s.ks_pass());
    let pass = pass_fraction >= cfg.pass_fraction_target && ks_ok;
    metadata.insert("bound_multiplier".into(), cfg.bound_multiplier);
    metadata.insert("pass_fraction_target".into(), cfg.pass_fraction_target);

    // Deduplicate warnings, keeping first appearance.
    let mut seen = std::collections::BTreeSet::new();
    warnings.retain(|w| seen.insert(w.clone()));

    Ok(ExperimentReport {
        experiment: experiment.to_string(),
        trials,
        primary: primary.to_string(),
        pass_fraction,
        pass,
        metadata,
        summaries,
        warnings,
        samples,
    })
}
