//! Running one scenario into a JSON report plus CSV trajectories.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use scp_core::dynamics::Params;
use scp_core::groups::TorusSubgroup;
use scp_core::scp_engine::{
    classify_built, judge, predict_built, product_embedding, quotient_injection_stability, Agreement, BuiltGroup,
    Classification, Counterexample, DistalityPrediction, ScpMeasure, ScpVerdict, StabilityStatus, StabilityTarget,
    ViolationReason, MAX_FINITE_ORDER,
};

use crate::scenario::Scenario;

#[derive(Clone, Debug, Serialize)]
pub struct CrossCheck {
    pub agreement: Agreement,
    pub constructed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityEntry {
    pub relation: String,
    pub status: StabilityStatus,
    pub source_verdict: String,
    pub image_verdict: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioReport {
    pub scenario_id: String,
    pub description: String,
    pub group: String,
    pub measure: String,
    pub seed: u64,
    pub expected: Option<String>,
    pub outcome: Option<String>,
    pub matched: bool,
    pub error: Option<String>,
    pub parameters: Params,
    pub prediction: Option<DistalityPrediction>,
    pub cross_check: Option<CrossCheck>,
    pub counterexample: Option<Counterexample>,
    pub verdict: Option<Classification>,
    pub stability: Vec<StabilityEntry>,
    pub evidence_paths: Vec<String>,
}

impl ScenarioReport {
    pub fn failed(id: &str, error: String) -> Self {
        Self {
            scenario_id: id.to_string(),
            description: String::new(),
            group: String::new(),
            measure: String::new(),
            seed: 0,
            expected: None,
            outcome: None,
            matched: false,
            error: Some(error),
            parameters: Params::default(),
            prediction: None,
            cross_check: None,
            counterexample: None,
            verdict: None,
            stability: Vec::new(),
            evidence_paths: Vec::new(),
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// `violation:<reason>` for violations, the bare tag otherwise.
pub fn outcome_label(v: &ScpVerdict) -> String {
    match v {
        ScpVerdict::Violation { reason, .. } => {
            let r = match reason {
                ViolationReason::NonIdempotentLimit { .. } => "non_idempotent_limit",
                ViolationReason::LimitNotNormalizedByShift { .. } => "limit_not_normalized_by_shift",
            };
            format!("violation:{r}")
        }
        v => v.tag().to_string(),
    }
}

fn expectation_met(expected: &str, v: &ScpVerdict) -> bool {
    expected == v.tag() || expected == outcome_label(v)
}

/// Quotients and embeddings applicable to the group.
pub fn stability_targets(group: &BuiltGroup) -> Vec<StabilityTarget> {
    match group {
        BuiltGroup::Finite(g) => {
            let mut t: Vec<StabilityTarget> = g
                .normal_subgroups()
                .into_iter()
                .filter(|n| n.len() > 1 && n.len() < g.order())
                .map(StabilityTarget::FiniteQuotient)
                .collect();
            if 2 * g.order() <= MAX_FINITE_ORDER {
                let (target, map) = product_embedding(g);
                t.push(StabilityTarget::FiniteEmbedding { target, map });
            }
            t
        }
        BuiltGroup::Torus(a) => {
            [1, 2, 3].into_iter().map(|k| StabilityTarget::TorusQuotient(TorusSubgroup::torsion(a.dim(), k))).collect()
        }
        BuiltGroup::Lattice(_) | BuiltGroup::Shift(_) => Vec::new(),
    }
}

fn target_label(t: &StabilityTarget) -> String {
    match t {
        StabilityTarget::TorusQuotient(k) => {
            format!("quotient by a subgroup with invariant factors {:?}", k.invariant_factors())
        }
        StabilityTarget::FiniteQuotient(n) => format!("quotient by a normal subgroup of order {}", n.len()),
        StabilityTarget::FiniteEmbedding { target, .. } => format!("embedding into {}", target.name()),
    }
}

fn stability_entries(group: &BuiltGroup, mu: &ScpMeasure, params: &Params) -> Vec<StabilityEntry> {
    stability_targets(group)
        .iter()
        .map(|t| match quotient_injection_stability(group, t, mu, params) {
            Ok(r) => StabilityEntry {
                relation: r.relation,
                status: r.status,
                source_verdict: outcome_label(&r.source.verdict),
                image_verdict: outcome_label(&r.image.verdict),
                detail: r.detail,
            },
            Err(e) => StabilityEntry {
                relation: target_label(t),
                status: StabilityStatus::Inconsistent,
                source_verdict: String::new(),
                image_verdict: String::new(),
                detail: e.to_string(),
            },
        })
        .collect()
}

fn write_trajectories(out: &Path, id: &str, c: &Classification) -> std::io::Result<Vec<String>> {
    let dir = out.join(id);
    fs::create_dir_all(&dir)?;
    let mut paths = Vec::new();
    for t in &c.trajectories {
        let header = serde_json::json!({ "scenario_id": id, "trajectory": t.name, "params": c.params });
        let path = dir.join(format!("{}.csv", t.name));
        let mut f = fs::File::create(&path)?;
        writeln!(f, "# {header}")?;
        f.write_all(t.csv.as_bytes())?;
        paths.push(format!("{id}/{}.csv", t.name));
    }
    Ok(paths)
}

/// Runs the full pipeline for one scenario. With `out`, writes
/// `<out>/<id>.json` and the trajectories under `<out>/<id>/`.
pub fn run_scenario(s: &Scenario, default_seed: u64, out: Option<&Path>) -> ScenarioReport {
    let seed = s.seed.unwrap_or(default_seed);
    let mut report = ScenarioReport::failed(&s.id, String::new());
    report.description = s.description.clone();
    report.seed = seed;
    report.expected = s.expected.clone();
    report.parameters = s.params.clone();
    report.error = None;
    let result = (|| -> scp_core::Result<()> {
        let group = s.group.build()?;
        report.group = group.describe();
        let built = s.build_measure(&group, seed)?;
        report.measure = built.measure.describe();
        let prediction = predict_built(&group)?;
        let c = classify_built(&group, &built.measure, &s.params)?;
        let (agreement, detail) = judge(prediction.point_wise_distal, built.constructed, &c.verdict);
        report.cross_check = Some(CrossCheck { agreement, constructed: built.constructed, detail });
        report.outcome = Some(outcome_label(&c.verdict));
        report.stability = stability_entries(&group, &built.measure, &s.params);
        report.matched = s.expected.as_deref().is_none_or(|e| expectation_met(e, &c.verdict))
            && agreement != Agreement::Failure
            && report.stability.iter().all(|e| e.status != StabilityStatus::Inconsistent);
        report.prediction = Some(prediction);
        report.counterexample = built.counterexample;
        report.verdict = Some(c);
        Ok(())
    })();
    if let Err(e) = result {
        report.error = Some(e.to_string());
        report.matched = false;
    }
    if let Some(out) = out {
        if let Some(c) = &report.verdict {
            match write_trajectories(out, &s.id, c) {
                Ok(p) => report.evidence_paths = p,
                Err(e) => {
                    report.error = Some(format!("writing trajectories: {e}"));
                    report.matched = false;
                }
            }
        }
    }
    report
}

pub fn write_report(out: &Path, report: &ScenarioReport) -> std::io::Result<PathBuf> {
    fs::create_dir_all(out)?;
    let path = out.join(format!("{}.json", report.scenario_id));
    fs::write(&path, report.to_json())?;
    Ok(path)
}
