//! Scenario runner for the SCP laboratory: scenario files, JSON reports,
//! CSV trajectories and the command implementations behind `scp-lab`.

pub mod catalog;
pub mod commands;
pub mod run;
pub mod scenario;

pub use catalog::{run_catalog, scenario_files, CatalogRun};
pub use run::{outcome_label, run_scenario, stability_targets, write_report, ScenarioReport};
pub use scenario::{Atom, MeasureSpec, Scenario};
