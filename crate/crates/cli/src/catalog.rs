//! Running a directory of scenarios.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::run::{run_scenario, write_report, ScenarioReport};
use crate::scenario::Scenario;

pub struct CatalogRun {
    pub reports: Vec<ScenarioReport>,
    pub warnings: Vec<String>,
}

impl CatalogRun {
    /// True iff every scenario met its expectation.
    pub fn all_matched(&self) -> bool {
        self.reports.iter().all(|r| r.matched)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_matched() {
            0
        } else {
            1
        }
    }
}

/// Scenario files of a directory, sorted by name.
pub fn scenario_files(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    files.sort();
    Ok(files)
}

fn stem(p: &Path) -> String {
    p.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned())
}

/// Loads every scenario under `dir`, keeps those whose id contains `filter`,
/// and runs them on `jobs` worker threads. Reports come back in file order.
pub fn run_catalog(
    dir: &Path,
    filter: Option<&str>,
    jobs: usize,
    seed: u64,
    out: Option<&Path>,
) -> std::io::Result<CatalogRun> {
    let mut warnings = Vec::new();
    let mut seen = BTreeSet::new();
    let mut jobs_list: Vec<Result<Scenario, ScenarioReport>> = Vec::new();
    for path in scenario_files(dir)? {
        match Scenario::load(&path) {
            Ok(s) => {
                if filter.is_some_and(|f| !s.id.contains(f)) {
                    continue;
                }
                if !seen.insert(s.id.clone()) {
                    jobs_list.push(Err(ScenarioReport::failed(&s.id, format!("duplicate id in {}", path.display()))));
                    continue;
                }
                jobs_list.push(Ok(s));
            }
            Err(e) => {
                let id = stem(&path);
                if filter.is_none_or(|f| id.contains(f)) {
                    jobs_list.push(Err(ScenarioReport::failed(&id, format!("parse error: {e}"))));
                }
            }
        }
    }
    if jobs_list.is_empty() {
        warnings.push(format!("no scenarios selected in {}", dir.display()));
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().map_err(std::io::Error::other)?;
    let reports: Vec<ScenarioReport> = pool.install(|| {
        jobs_list
            .into_par_iter()
            .map(|j| match j {
                Ok(s) => run_scenario(&s, seed, out),
                Err(r) => r,
            })
            .collect()
    });
    if let Some(out) = out {
        for r in &reports {
            write_report(out, r)?;
        }
    }
    Ok(CatalogRun { reports, warnings })
}
