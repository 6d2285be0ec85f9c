//! Runs the experiment matrix and persists results.
//!
//! Cells (design, problem, run) execute independently and in parallel; each
//! run is seeded from a stable mix of the base seed and its canonical cell
//! indices, so adding or removing cells never changes another cell's stream.
//! A single writer appends rows in deterministic cell order.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde_json::json;

use etv_ea::design::{design_by_name, DesignSpec};
use etv_ea::ea::{EaState, RunRecord};
use etv_ea::{Problem, ProblemId};

use crate::config::ExperimentConfig;

/// Frozen header of the results table.
pub const RESULTS_HEADER: &str = "design,problem,run,checkpoint,best_fitness";

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable 64-bit mix of the base seed and the canonical design, problem and
/// run indices.
pub fn run_seed(base: u64, design_index: usize, problem_index: usize, run_index: usize) -> u64 {
    let mut seed = splitmix64(base);
    seed = splitmix64(seed ^ design_index as u64);
    seed = splitmix64(seed ^ problem_index as u64);
    seed = splitmix64(seed ^ run_index as u64);
    seed
}

/// One cell of the experiment matrix.
#[derive(Clone, Debug)]
struct Cell {
    design: &'static DesignSpec,
    problem: ProblemId,
    run: usize,
    seed: u64,
}

impl Cell {
    fn label(&self) -> String {
        format!("{} {} run{}", self.design.name, self.problem, self.run)
    }

    fn file_name(&self) -> String {
        format!(
            "{}_{}_r{:02}.jsonl",
            self.design.name, self.problem, self.run
        )
    }
}

/// Outcome of a matrix execution.
#[derive(Debug)]
pub struct RunSummary {
    pub completed: usize,
    /// Labels and messages of cells whose run panicked.
    pub failed: Vec<(String, String)>,
    pub results_csv: PathBuf,
}

/// Executes the full matrix described by `config`, writing one JSONL log per
/// run plus the matrix-level results table. Fails fast if the output
/// directory is not writable; a panicking cell is recorded and skipped.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunSummary> {
    config.validate()?;

    let out_dir = &config.out_dir;
    let runs_dir = out_dir.join("runs");
    fs::create_dir_all(&runs_dir)
        .with_context(|| format!("creating output directory {}", runs_dir.display()))?;
    let results_path = out_dir.join("results.csv");
    let mut results = BufWriter::new(
        File::create(&results_path)
            .with_context(|| format!("creating {}", results_path.display()))?,
    );
    writeln!(results, "{RESULTS_HEADER}")?;

    let mut cells = Vec::new();
    for design_name in &config.designs {
        let design = design_by_name(design_name).expect("validated design name");
        let d_idx = etv_ea::design::design_index(design_name).unwrap();
        for problem_name in &config.problems {
            let problem: ProblemId = problem_name.parse().expect("validated problem name");
            for run in 0..config.runs {
                cells.push(Cell {
                    design,
                    problem,
                    run,
                    seed: run_seed(config.base_seed, d_idx, problem.index(), run),
                });
            }
        }
    }

    let outcomes: Vec<(Cell, std::thread::Result<RunRecord>)> = cells
        .into_par_iter()
        .map(|cell| {
            let result = catch_unwind(AssertUnwindSafe(|| execute_cell(config, &cell)));
            (cell, result)
        })
        .collect();

    let mut completed = 0;
    let mut failed = Vec::new();
    for (cell, outcome) in outcomes {
        match outcome {
            Ok(record) => {
                let log_path = runs_dir.join(cell.file_name());
                write_run_log(&log_path, config, &cell, &record)
                    .with_context(|| format!("writing {}", log_path.display()))?;
                for (generation, best) in &record.checkpoints {
                    writeln!(
                        results,
                        "{},{},{},{},{}",
                        cell.design.name, cell.problem, cell.run, generation, best
                    )?;
                }
                completed += 1;
            }
            Err(panic) => {
                let message = panic_message(panic);
                eprintln!("cell {} failed: {message}", cell.label());
                failed.push((cell.label(), message));
            }
        }
    }
    results.flush()?;

    Ok(RunSummary {
        completed,
        failed,
        results_csv: results_path,
    })
}

fn execute_cell(config: &ExperimentConfig, cell: &Cell) -> RunRecord {
    let problem: Problem = Problem::get(cell.problem);
    let mut ea = EaState::new(problem, *cell.design, config.ea_params(), cell.seed);
    ea.run(config.generations, config.checkpoint_interval)
}

/// JSON-lines log of one run: a header record with the resolved constants,
/// one checkpoint record per stopping point, and one portfolio record per
/// adaptation update.
fn write_run_log(
    path: &std::path::Path,
    config: &ExperimentConfig,
    cell: &Cell,
    record: &RunRecord,
) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    let header = json!({
        "type": "run",
        "design": cell.design.name,
        "problem": cell.problem.name(),
        "run": cell.run,
        "seed": cell.seed,
        "generations": config.generations,
        "checkpoint_interval": config.checkpoint_interval,
        "adaptation_interval": config.adaptation_interval,
        "constants": config.constants,
    });
    writeln!(out, "{header}")?;
    for (generation, best) in &record.checkpoints {
        writeln!(
            out,
            "{}",
            json!({"type": "checkpoint", "gen": generation, "best": best})
        )?;
    }
    for (generation, probs) in &record.portfolio_trajectory {
        writeln!(
            out,
            "{}",
            json!({"type": "portfolio", "gen": generation, "probs": probs})
        )?;
    }
    out.flush()?;
    Ok(())
}

fn panic_message(panic: Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = panic.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = panic.downcast_ref::<String>() {
        s.clone()
    } else {
        "unknown panic".to_string()
    }
}
