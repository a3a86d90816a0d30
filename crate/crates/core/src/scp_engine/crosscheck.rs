use serde::Serialize;

use super::classify::classify_built;
use super::counterexample::{construct_counterexample, shift_counterexample};
use super::predict::{predict_built, DistalityPrediction};
use super::spec::{BuiltGroup, GroupSpec, ScpMeasure};
use super::verdict::{Classification, ScpVerdict};
use crate::dynamics::Params;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Agreement {
    Agreement,
    Failure,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossCheckEntry {
    pub label: String,
    pub constructed: bool,
    pub agreement: Agreement,
    pub detail: String,
    pub classification: Classification,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub group: String,
    pub prediction: DistalityPrediction,
    pub entries: Vec<CrossCheckEntry>,
    pub failures: usize,
}

impl ExperimentReport {
    pub fn agrees(&self) -> bool {
        self.failures == 0 && self.entries.iter().all(|e| e.agreement == Agreement::Agreement)
    }
}

/// Judges one simulated verdict against the prediction. For a non-distal
/// group only the constructed counterexample is required to violate.
pub fn judge(point_wise_distal: bool, constructed: bool, verdict: &ScpVerdict) -> (Agreement, String) {
    match (point_wise_distal, verdict) {
        (_, ScpVerdict::Inconclusive { .. }) => (Agreement::Inconclusive, "budget exhausted".into()),
        (true, ScpVerdict::Violation { .. }) => (Agreement::Failure, "violation on a point-wise distal group".into()),
        (true, v) => (Agreement::Agreement, format!("{} on a point-wise distal group", v.tag())),
        (false, ScpVerdict::Violation { .. }) => (Agreement::Agreement, "violation on a non-distal group".into()),
        (false, v) if constructed => {
            (Agreement::Failure, format!("constructed counterexample gave {} instead of a violation", v.tag()))
        }
        (false, v) => (Agreement::Agreement, format!("{} is allowed on a non-distal group", v.tag())),
    }
}

/// Classifies every measure of the family and, for a non-distal prediction,
/// the constructed counterexample as well.
pub fn cross_check_dichotomy(
    group: &GroupSpec,
    family: &[(String, ScpMeasure)],
    params: &Params,
) -> Result<ExperimentReport> {
    let built = group.build()?;
    let prediction = predict_built(&built)?;
    let mut runs: Vec<(String, bool, ScpMeasure)> = family.iter().map(|(l, m)| (l.clone(), false, m.clone())).collect();
    if !prediction.point_wise_distal {
        if let Some(m) = counterexample_for(&built, params)? {
            runs.push(("constructed counterexample".into(), true, m));
        }
    }
    let mut entries = Vec::new();
    for (label, constructed, mu) in runs {
        let classification = classify_built(&built, &mu, params)?;
        let (agreement, detail) = judge(prediction.point_wise_distal, constructed, &classification.verdict);
        entries.push(CrossCheckEntry { label, constructed, agreement, detail, classification });
    }
    let failures = entries.iter().filter(|e| e.agreement == Agreement::Failure).count();
    Ok(ExperimentReport { group: built.describe(), prediction, entries, failures })
}

/// The measure expected to violate SCP on a non-distal group.
pub fn counterexample_for(group: &BuiltGroup, params: &Params) -> Result<Option<ScpMeasure>> {
    Ok(match group {
        BuiltGroup::Torus(a) => Some(construct_counterexample(a, params.atom_scale)?.measure()),
        BuiltGroup::Shift(l) if l.order() > 1 => Some(shift_counterexample(l)?),
        _ => None,
    })
}
