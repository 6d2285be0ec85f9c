//! Experiment configuration: a flat JSON file, overridable from the CLI.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use etv_ea::design::design_by_name;
use etv_ea::ea::EaParams;
use etv_ea::ops::OperatorParams;
use etv_ea::ProblemId;

/// Algorithm constants shared by every run of an experiment. These are
/// recorded verbatim in each run's log header.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Constants {
    pub beta: f64,
    pub delta: f64,
    pub floor: f64,
    pub population: usize,
    pub lineage_depth: usize,
    pub blx_alpha: f64,
    pub line_alpha: f64,
    pub wright_r: f64,
    pub raise_amount: f64,
    pub creep_amount: f64,
    pub differential_f: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants {
            beta: 0.5,
            delta: 0.001,
            floor: 0.02,
            population: 30,
            lineage_depth: 6,
            blx_alpha: 0.2,
            line_alpha: 0.3,
            wright_r: 0.5,
            raise_amount: 0.01,
            creep_amount: 0.001,
            differential_f: 0.5,
        }
    }
}

/// One experiment: which designs and problems to run, how long, and where
/// results go. Serialized as flat JSON; CLI flags override file values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problems: Vec<String>,
    pub designs: Vec<String>,
    pub runs: usize,
    pub generations: u32,
    pub checkpoint_interval: u32,
    pub adaptation_interval: u32,
    pub base_seed: u64,
    pub out_dir: PathBuf,
    #[serde(flatten)]
    pub constants: Constants,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            problems: ProblemId::ALL
                .iter()
                .map(|p| p.name().to_string())
                .collect(),
            designs: etv_ea::DESIGNS.iter().map(|d| d.name.to_string()).collect(),
            runs: 10,
            generations: 2000,
            checkpoint_interval: 100,
            adaptation_interval: 20,
            base_seed: 42,
            out_dir: PathBuf::from("results"),
            constants: Constants::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let config: ExperimentConfig = serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        Ok(config)
    }

    /// Checks interval divisibility, name validity and constant sanity.
    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            bail!("runs must be at least 1");
        }
        if self.generations == 0 || self.checkpoint_interval == 0 || self.adaptation_interval == 0 {
            bail!("generations and intervals must be positive");
        }
        if !self.generations.is_multiple_of(self.checkpoint_interval) {
            bail!(
                "generations ({}) must be divisible by checkpoint_interval ({})",
                self.generations,
                self.checkpoint_interval
            );
        }
        if !self
            .checkpoint_interval
            .is_multiple_of(self.adaptation_interval)
        {
            bail!(
                "checkpoint_interval ({}) must be divisible by adaptation_interval ({})",
                self.checkpoint_interval,
                self.adaptation_interval
            );
        }
        if self.designs.is_empty() || self.problems.is_empty() {
            bail!("at least one design and one problem are required");
        }
        for name in &self.designs {
            if design_by_name(name).is_none() {
                bail!(
                    "unknown design `{name}`; valid designs: {}",
                    valid_design_names()
                );
            }
        }
        for name in &self.problems {
            name.parse::<ProblemId>().map_err(anyhow::Error::msg)?;
        }
        let c = &self.constants;
        if !(c.beta > 0.0 && c.beta <= 1.0) {
            bail!("beta must be in (0, 1]");
        }
        if c.delta <= 0.0 {
            bail!("delta must be positive");
        }
        if !(0.0..1.0).contains(&c.floor) {
            bail!("floor must be in [0, 1)");
        }
        if c.population < 4 {
            bail!("population must be at least 4");
        }
        Ok(())
    }

    /// Per-run parameters for the core optimizer.
    pub fn ea_params(&self) -> EaParams<f64> {
        let c = &self.constants;
        EaParams {
            population_size: c.population,
            adaptation_interval: self.adaptation_interval,
            lineage_depth: c.lineage_depth,
            beta: c.beta,
            floor: c.floor,
            delta: c.delta,
            ops: OperatorParams {
                wright_r: c.wright_r,
                line_alpha: c.line_alpha,
                blx_alpha: c.blx_alpha,
                differential_f: c.differential_f,
                raise_amount: c.raise_amount,
                creep_amount: c.creep_amount,
            },
            record_events: false,
        }
    }
}

pub fn valid_design_names() -> String {
    etv_ea::DESIGNS
        .iter()
        .map(|d| d.name)
        .collect::<Vec<_>>()
        .join(", ")
}
