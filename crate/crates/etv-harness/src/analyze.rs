//! Turns a finished results table into confidence summaries, factorial
//! effects and boxplot inputs.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

use etv_ea::design::design_index;
use etv_ea::stats::{confidence_scores, factorial_effects, mean_final_measures, FactorialEffects};

/// Names of the eight designs entering the factorial analysis, in code order.
const FACTORIAL_DESIGNS: [&str; 8] = ["EA1", "EA2", "EA3", "EA4", "EA5", "EA6", "EA7", "EA8"];

#[derive(Debug)]
pub struct AnalyzeReport {
    /// (design, problem, mean score, final score), in output order.
    pub summary: Vec<(String, String, f64, f64)>,
    /// Effects over the 2^3 design, when all eight designs are present.
    pub effects: Option<(FactorialEffects, FactorialEffects)>,
    pub summary_csv: PathBuf,
    pub effects_csv: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
struct Row {
    design: String,
    problem: String,
    run: usize,
    checkpoint: u32,
    best: f64,
}

/// Analyzes `<in_dir>/results.csv` and writes summary, effects and boxplot
/// tables into `out_dir`. Rewrites outputs from scratch, so re-running is
/// idempotent.
pub fn analyze_results(in_dir: &Path, out_dir: &Path) -> Result<AnalyzeReport> {
    let results_path = in_dir.join("results.csv");
    if !results_path.exists() {
        bail!("no results found in {}", in_dir.display());
    }
    let rows = read_rows(&results_path)?;
    if rows.is_empty() {
        bail!("no results found in {}", results_path.display());
    }

    let designs = ordered_values(rows.iter().map(|r| r.design.clone()), |name| {
        design_index(name).unwrap_or(usize::MAX)
    });
    let problems = ordered_values(rows.iter().map(|r| r.problem.clone()), problem_order);
    let runs: BTreeSet<usize> = rows.iter().map(|r| r.run).collect();
    let checkpoints: BTreeSet<u32> = rows.iter().map(|r| r.checkpoint).collect();

    // completeness: every (design, problem, run, checkpoint) exactly once
    let mut table: BTreeMap<(String, String, usize, u32), f64> = BTreeMap::new();
    for row in &rows {
        let key = (
            row.design.clone(),
            row.problem.clone(),
            row.run,
            row.checkpoint,
        );
        if table.insert(key, row.best).is_some() {
            bail!(
                "duplicate result row for {} {} run{} gen{}",
                row.design,
                row.problem,
                row.run,
                row.checkpoint
            );
        }
    }
    let mut missing = Vec::new();
    for design in &designs {
        for problem in &problems {
            for run in &runs {
                for checkpoint in &checkpoints {
                    let key = (design.clone(), problem.clone(), *run, *checkpoint);
                    if !table.contains_key(&key) {
                        missing.push(format!("{design} {problem} run{run} gen{checkpoint}"));
                    }
                }
            }
        }
    }
    if !missing.is_empty() {
        let shown = missing
            .iter()
            .take(20)
            .cloned()
            .collect::<Vec<_>>()
            .join(", ");
        let suffix = if missing.len() > 20 { ", ..." } else { "" };
        bail!(
            "incomplete matrix, {} missing cells: {shown}{suffix}",
            missing.len()
        );
    }

    // per (problem, checkpoint): confidence score of each design
    let mut scores: BTreeMap<(String, String), Vec<f64>> = BTreeMap::new();
    for problem in &problems {
        for checkpoint in &checkpoints {
            let samples: Vec<(String, Vec<f64>)> = designs
                .iter()
                .map(|design| {
                    let sample: Vec<f64> = runs
                        .iter()
                        .map(|run| table[&(design.clone(), problem.clone(), *run, *checkpoint)])
                        .collect();
                    (design.clone(), sample)
                })
                .collect();
            for (design, score) in confidence_scores(&samples) {
                scores
                    .entry((design, problem.clone()))
                    .or_default()
                    .push(score);
            }
        }
    }

    let mut summary = Vec::new();
    for design in &designs {
        for problem in &problems {
            let series = &scores[&(design.clone(), problem.clone())];
            let (mean, fin) = mean_final_measures(series, checkpoints.len())?;
            summary.push((design.clone(), problem.clone(), mean, fin));
        }
    }

    let effects = if FACTORIAL_DESIGNS
        .iter()
        .all(|d| designs.iter().any(|x| x == d))
    {
        let mut mean_blocks = Vec::new();
        let mut final_blocks = Vec::new();
        for problem in &problems {
            let mut mean_block = [0.0; 8];
            let mut final_block = [0.0; 8];
            for (d, name) in FACTORIAL_DESIGNS.iter().enumerate() {
                let row = summary
                    .iter()
                    .find(|(sd, sp, _, _)| sd == name && sp == problem)
                    .expect("summary covers the full grid");
                mean_block[d] = row.2;
                final_block[d] = row.3;
            }
            mean_blocks.push(mean_block);
            final_blocks.push(final_block);
        }
        Some((
            factorial_effects(&mean_blocks)?,
            factorial_effects(&final_blocks)?,
        ))
    } else {
        None
    };

    std::fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;

    let summary_csv = out_dir.join("summary.csv");
    let mut out = BufWriter::new(File::create(&summary_csv)?);
    writeln!(out, "design,problem,mean,final")?;
    for (design, problem, mean, fin) in &summary {
        writeln!(out, "{design},{problem},{mean},{fin}")?;
    }
    out.flush()?;

    for (name, column) in [("boxplot_mean.csv", 2usize), ("boxplot_final.csv", 3usize)] {
        let mut out = BufWriter::new(File::create(out_dir.join(name))?);
        writeln!(out, "design,problem,score")?;
        for row in &summary {
            let score = if column == 2 { row.2 } else { row.3 };
            writeln!(out, "{},{},{}", row.0, row.1, score)?;
        }
        out.flush()?;
    }

    let effects_csv = match &effects {
        Some((mean_effects, final_effects)) => {
            let path = out_dir.join("effects.csv");
            let mut out = BufWriter::new(File::create(&path)?);
            writeln!(out, "factor,mean_effect,final_effect")?;
            for ((name, mean_v), (_, final_v)) in
                mean_effects.named().iter().zip(final_effects.named())
            {
                writeln!(out, "{name},{mean_v},{final_v}")?;
            }
            out.flush()?;
            Some(path)
        }
        None => None,
    };

    Ok(AnalyzeReport {
        summary,
        effects,
        summary_csv,
        effects_csv,
    })
}

fn read_rows(path: &Path) -> Result<Vec<Row>> {
    let mut reader =
        csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        if record.len() != 5 {
            bail!("malformed results row: {record:?}");
        }
        rows.push(Row {
            design: record[0].to_string(),
            problem: record[1].to_string(),
            run: record[2].parse().context("run column")?,
            checkpoint: record[3].parse().context("checkpoint column")?,
            best: record[4].parse().context("best_fitness column")?,
        });
    }
    Ok(rows)
}

/// Distinct values in first-seen data order, then sorted by a canonical key.
fn ordered_values<I, F>(values: I, key: F) -> Vec<String>
where
    I: Iterator<Item = String>,
    F: Fn(&str) -> usize,
{
    let mut seen = Vec::new();
    for v in values {
        if !seen.contains(&v) {
            seen.push(v);
        }
    }
    seen.sort_by_key(|v| key(v));
    seen
}

fn problem_order(name: &str) -> usize {
    name.parse::<etv_ea::ProblemId>()
        .map(|p| p.index())
        .unwrap_or(usize::MAX)
}
