use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use scp_lab::commands::{classify_matrix, demo_7_2, harmonic};
use scp_lab::{run_catalog, scenario_files};

fn catalog_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../catalog")
}

fn scp_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scp-lab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn catalog_writes_one_report_per_scenario() {
    let out = tempfile::tempdir().unwrap();
    let o =
        scp_lab(&["catalog", catalog_dir().to_str().unwrap(), "--jobs", "4", "--out", out.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let scenarios = scenario_files(&catalog_dir()).unwrap();
    assert!(scenarios.len() >= 12);
    for s in &scenarios {
        let id = s.file_stem().unwrap().to_str().unwrap();
        let report = out.path().join(format!("{id}.json"));
        let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
        assert_eq!(json["scenario_id"], id);
        assert_eq!(json["matched"], true);
        for p in json["evidence_paths"].as_array().unwrap() {
            assert!(out.path().join(p.as_str().unwrap()).is_file(), "{id}: {p}");
        }
    }
    assert!(stdout(&o).contains(&format!("{} scenarios, {} matched", scenarios.len(), scenarios.len())));
}

#[test]
fn filter_selects_the_shift_scenario() {
    let run = run_catalog(&catalog_dir(), Some("lemma-5-1"), 1, 0, None).unwrap();
    assert_eq!(run.reports.len(), 1);
    assert_eq!(run.reports[0].scenario_id, "lemma-5-1");
    assert_eq!(run.reports[0].outcome.as_deref(), Some("violation:limit_not_normalized_by_shift"));
    assert!(run.all_matched());
}

#[test]
fn empty_directory_warns_and_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let o = scp_lab(&["catalog", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning: no scenarios selected"));
}

#[test]
fn malformed_scenario_is_reported_and_fails() {
    let dir = tempfile::tempdir().unwrap();
    fs::copy(catalog_dir().join("finite-q8-point.toml"), dir.path().join("finite-q8-point.toml")).unwrap();
    fs::write(dir.path().join("broken.toml"), "id = \"broken\"\n[group]\nfamily = \"moebius\"\n").unwrap();
    let run = run_catalog(dir.path(), None, 1, 0, None).unwrap();
    assert_eq!(run.reports.len(), 2);
    let broken = run.reports.iter().find(|r| r.scenario_id == "broken").unwrap();
    assert!(!broken.matched);
    assert!(broken.error.as_deref().is_some_and(|e| e.starts_with("parse error")));
    assert_eq!(run.exit_code(), 1);
    let o = scp_lab(&["catalog", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL broken"));
}

#[test]
fn reports_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for (dir, jobs) in [(&a, "1"), (&b, "3")] {
        let o = scp_lab(&[
            "catalog",
            catalog_dir().to_str().unwrap(),
            "--jobs",
            jobs,
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    for s in scenario_files(&catalog_dir()).unwrap() {
        let id = s.file_stem().unwrap().to_str().unwrap().to_string();
        let read = |root: &Path| fs::read(root.join(format!("{id}.json"))).unwrap();
        let (ra, rb) = (read(a.path()), read(b.path()));
        let strip =
            |bytes: Vec<u8>, root: &Path| String::from_utf8(bytes).unwrap().replace(root.to_str().unwrap(), "<out>");
        assert_eq!(strip(ra, a.path()), strip(rb, b.path()), "{id}");
    }
}

#[test]
fn scp_runs_a_single_scenario() {
    let o = scp_lab(&["scp", catalog_dir().join("lattice-z-bernoulli.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(json["outcome"], "dissipating");
}

#[test]
fn classify_cat_map() {
    let r = classify_matrix("2,1;1,1").unwrap();
    assert_eq!(r.charpoly, vec![1, -3, 1]);
    assert!(!r.distal);
    assert!(r.ergodic);
    let o = scp_lab(&["classify", "2,1;1,1"]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(json["distal"], false);
}

#[test]
fn classify_unipotent() {
    let r = classify_matrix("1,1;0,1").unwrap();
    assert!(r.distal);
    assert!(!r.ergodic);
}

#[test]
fn classify_rejects_non_unimodular() {
    let e = classify_matrix("2,0;0,1").unwrap_err().to_string();
    assert!(e.contains('2'), "{e}");
    let o = scp_lab(&["classify", "2,0;0,1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn harmonic_functions_on_s3() {
    let group = "kind = \"symmetric\"\nn = 3\n";
    let measure = "atoms = [{ at = 1, weight = \"1/2\" }, { at = 0, weight = \"1/2\" }]\n";
    let r = harmonic(group, measure).unwrap();
    assert!(r.choquet_deny);
    assert_eq!(r.dim, r.cosets);
    assert_eq!(r.cosets * r.space.support_subgroup.len(), 6);

    let dir = tempfile::tempdir().unwrap();
    let (g, m) = (dir.path().join("group.toml"), dir.path().join("measure.toml"));
    fs::write(&g, group).unwrap();
    fs::write(&m, measure).unwrap();
    let o = scp_lab(&["harmonic", g.to_str().unwrap(), m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(json["choquet_deny"], true);
}

#[test]
fn demo_collapses_beyond_window() {
    let entries = demo_7_2(20, 8).unwrap();
    assert_eq!(entries.len(), 2);
    for e in &entries {
        assert!(e.report.distal);
        assert!(e.report.exact_zero_beyond_window);
        assert!(e.report.not_tortrat);
    }
    // ν̂ vanishes at odd m, so the last surviving character is (2, −8).
    assert_eq!(entries[0].report.collapse_from, Some(5));
    assert_eq!(entries[1].report.collapse_from, Some(9));
    let o = scp_lab(&["demo-7-2", "--kmax", "12", "--window", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(json[0]["report"]["collapse_from"], 3);
    assert_eq!(json[1]["report"]["collapse_from"], 5);
}
