use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};

use etv_ea::{Problem, ProblemId, DESIGNS};
use etv_harness::{analyze_results, run_experiment, Constants, ExperimentConfig};

/// Adaptive evolutionary optimization experiments.
#[derive(Parser)]
#[command(name = "etv", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a design x problem x seed experiment matrix.
    Run(RunArgs),
    /// Analyze a finished results directory.
    Analyze(AnalyzeArgs),
    /// List available designs, problems and default constants.
    List,
}

#[derive(Args)]
struct RunArgs {
    /// JSON config file; flags below override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Base seed for the whole matrix.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated design names (EA1..EA8, SGA).
    #[arg(long, value_delimiter = ',')]
    designs: Option<Vec<String>>,
    /// Comma-separated problem names (F1..F10).
    #[arg(long, value_delimiter = ',')]
    problems: Option<Vec<String>>,
    /// Runs per (design, problem) cell.
    #[arg(long)]
    runs: Option<usize>,
    /// Generations per run.
    #[arg(long)]
    generations: Option<u32>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Directory containing results.csv.
    #[arg(long = "in")]
    in_dir: PathBuf,
    /// Output directory for summary/effects/boxplot tables (default: --in).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::List => cmd_list(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let mut config = match &args.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = args.seed {
        config.base_seed = seed;
    }
    if let Some(out) = args.out {
        config.out_dir = out;
    }
    if let Some(designs) = args.designs {
        config.designs = designs;
    }
    if let Some(problems) = args.problems {
        config.problems = problems;
    }
    if let Some(runs) = args.runs {
        config.runs = runs;
    }
    if let Some(generations) = args.generations {
        config.generations = generations;
    }
    config.validate()?;

    let summary = match args.threads {
        Some(threads) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()?;
            pool.install(|| run_experiment(&config))?
        }
        None => run_experiment(&config)?,
    };

    println!(
        "completed {} runs -> {}",
        summary.completed,
        summary.results_csv.display()
    );
    if !summary.failed.is_empty() {
        for (cell, message) in &summary.failed {
            eprintln!("failed cell {cell}: {message}");
        }
        bail!("{} cell(s) failed", summary.failed.len());
    }
    Ok(())
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<()> {
    let out_dir = args.out.unwrap_or_else(|| args.in_dir.clone());
    let report = analyze_results(&args.in_dir, &out_dir)?;
    println!(
        "summary for {} design/problem cells -> {}",
        report.summary.len(),
        report.summary_csv.display()
    );
    if let Some((mean_effects, final_effects)) = &report.effects {
        println!("factor effects (mean / final):");
        for ((name, mean_v), (_, final_v)) in mean_effects.named().iter().zip(final_effects.named())
        {
            println!("  {name:>8}: {mean_v:8.3} / {final_v:8.3}");
        }
    }
    Ok(())
}

fn cmd_list() -> Result<()> {
    println!("designs:");
    for d in &DESIGNS {
        let interp = match d.interpretation {
            Some(etv_ea::Interpretation::Average) => "average",
            Some(etv_ea::Interpretation::Outliers) => "outliers",
            None => "none",
        };
        let credit = match d.credit {
            etv_ea::CreditMode::Direct => "direct",
            etv_ea::CreditMode::Etv => "takeover",
            etv_ea::CreditMode::None => "none",
        };
        println!(
            "  {:<4} interpretation={:<8} diversity={:<3} credit={}",
            d.name,
            interp,
            if d.diversity_control { "yes" } else { "no" },
            credit
        );
    }
    println!("problems:");
    for id in ProblemId::ALL {
        let p: Problem = Problem::get(id);
        println!(
            "  {:<4} dims={:<3} bounds=[{}, {}]",
            id.name(),
            p.dims(),
            p.bounds().lower()[0],
            p.bounds().upper()[0]
        );
    }
    let c = Constants::default();
    println!("default constants:");
    println!("  beta={} delta={} floor={}", c.beta, c.delta, c.floor);
    println!(
        "  population={} lineage_depth={} runs=10 generations=2000",
        c.population, c.lineage_depth
    );
    println!(
        "  blx_alpha={} line_alpha={} wright_r={} raise_amount={} creep_amount={} differential_f={}",
        c.blx_alpha, c.line_alpha, c.wright_r, c.raise_amount, c.creep_amount, c.differential_f
    );
    Ok(())
}
