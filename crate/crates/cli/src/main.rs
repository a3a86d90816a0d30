use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use scp_lab::commands::{classify_matrix, demo_7_2, harmonic};
use scp_lab::{run_catalog, run_scenario, write_report, Scenario};

#[derive(Parser)]
#[command(name = "scp-lab", version, about = "Shifted convolution property laboratory")]
struct Cli {
    /// Seed for scenarios with generated measures.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spectral verdicts for an integer matrix such as "2,1;1,1".
    Classify { matrix: String },
    /// Run one scenario file and print its report.
    Scp {
        scenario: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every scenario in a directory.
    Catalog {
        dir: PathBuf,
        /// Only scenarios whose id contains this string.
        #[arg(long)]
        filter: Option<String>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bounded harmonic functions of a measure on a finite group.
    Harmonic { group_file: PathBuf, measure_file: PathBuf },
    /// Orbit collapse of L-invariant measures under (w, z) ↦ (w + z, z).
    #[command(name = "demo-7-2")]
    Demo72 {
        #[arg(long, default_value_t = 20)]
        kmax: usize,
        #[arg(long, default_value_t = 8)]
        window: u32,
    },
}

fn print_json<T: serde::Serialize>(v: &T) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn read(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Classify { matrix } => match classify_matrix(&matrix) {
            Ok(r) => {
                print_json(&r);
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
        Command::Scp { scenario, out } => {
            let s = match Scenario::load(&scenario) {
                Ok(s) => s,
                Err(e) => return fail(e),
            };
            let report = run_scenario(&s, cli.seed, out.as_deref());
            if let Some(out) = &out {
                if let Err(e) = write_report(out, &report) {
                    return fail(e);
                }
            }
            print!("{}", report.to_json());
            if report.matched {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::Catalog { dir, filter, jobs, out } => {
            let run = match run_catalog(&dir, filter.as_deref(), jobs, cli.seed, out.as_deref()) {
                Ok(r) => r,
                Err(e) => return fail(e),
            };
            for w in &run.warnings {
                eprintln!("warning: {w}");
            }
            for r in &run.reports {
                let status = if r.matched { "ok" } else { "FAIL" };
                let outcome = r.outcome.as_deref().or(r.error.as_deref()).unwrap_or("-");
                println!("{status:4} {:32} {outcome}", r.scenario_id);
            }
            println!("{} scenarios, {} matched", run.reports.len(), run.reports.iter().filter(|r| r.matched).count());
            ExitCode::from(run.exit_code() as u8)
        }
        Command::Harmonic { group_file, measure_file } => {
            let result = read(&group_file).and_then(|g| read(&measure_file).and_then(|m| harmonic(&g, &m)));
            match result {
                Ok(r) => {
                    print_json(&r);
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Command::Demo72 { kmax, window } => match demo_7_2(kmax, window) {
            Ok(r) => {
                print_json(&r);
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
    }
}
