//! Benchmark sweeps over instances and algorithms.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use anyhow::{bail, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use exact_solver::{epsilon_constraint_front, ExactConfig};
use instancegen::{generate, table6, table7, GenSpec};
use metrics::{assign_saw, IdealPoint, MetricReport, NormalizationBounds, SawWeights};
use model_core::model::{ObjectiveVector, ProblemInstance};
use model_core::Error;
use nsga2::{run_nsga2, NsgaConfig};

use crate::io::load_instance;

/// Where a benchmark instance comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceSource {
    /// 1-based row of the five-row ladder.
    Table7(usize),
    /// 1-based row of the 22-row ladder.
    Table6(usize),
    Path(PathBuf),
    Generated(GenSpec),
}

impl InstanceSource {
    pub fn name(&self) -> String {
        match self {
            InstanceSource::Table7(r) => format!("t7-r{r}"),
            InstanceSource::Table6(r) => format!("t6-r{r}"),
            InstanceSource::Path(p) => p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string()),
            InstanceSource::Generated(g) => format!("gen-{}", g.seed),
        }
    }

    pub fn load(&self) -> Result<ProblemInstance> {
        let row = |specs: Vec<GenSpec>, r: usize| -> Result<ProblemInstance> {
            match r.checked_sub(1).and_then(|i| specs.get(i)) {
                Some(spec) => Ok(generate(spec)?),
                None => bail!("no ladder row {r}"),
            }
        };
        match self {
            InstanceSource::Table7(r) => row(table7(), *r),
            InstanceSource::Table6(r) => row(table6(), *r),
            InstanceSource::Path(p) => load_instance(p),
            InstanceSource::Generated(g) => Ok(generate(g)?),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Exact,
    Nsga2,
}

fn default_algorithms() -> Vec<Algorithm> {
    vec![Algorithm::Exact, Algorithm::Nsga2]
}

fn default_grid() -> usize {
    10
}

fn default_seeds() -> Vec<u64> {
    vec![1]
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkPlan {
    pub instances: Vec<InstanceSource>,
    #[serde(default = "default_algorithms")]
    pub algorithms: Vec<Algorithm>,
    /// Wall-clock cap per exact run.
    pub time_limit_seconds: f64,
    #[serde(default = "default_grid")]
    pub grid: usize,
    /// One NSGA-II run per seed.
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub nsga: NsgaConfig,
    /// Search nodes per exact single-objective solve; unlimited when absent.
    #[serde(default)]
    pub node_limit: Option<u64>,
    /// Write run times; off gives byte-identical reports across runs.
    #[serde(default = "yes")]
    pub record_timing: bool,
    #[serde(default)]
    pub ideal: IdealPoint,
}

impl BenchmarkPlan {
    pub fn validate(&self) -> Result<()> {
        if !(self.time_limit_seconds > 0.0 && self.time_limit_seconds.is_finite()) {
            bail!("time_limit_seconds must be positive");
        }
        if self.grid == 0 {
            bail!("grid must be at least 1");
        }
        if self.algorithms.contains(&Algorithm::Nsga2) && self.seeds.is_empty() {
            bail!("nsga2 needs at least one seed");
        }
        self.nsga.validate()?;
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let plan: Self = serde_json::from_str(text)?;
        plan.validate()?;
        Ok(plan)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "message")]
pub enum RowStatus {
    Ok,
    TimedOut,
    Failed(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub algo: String,
    pub instance: String,
    pub status: RowStatus,
    /// Wall time of the run; `None` when timing is off.
    pub seconds: Option<f64>,
    pub front: Vec<ObjectiveVector>,
    pub report: Option<MetricReport>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BenchResult {
    pub rows: Vec<BenchRow>,
}

impl BenchResult {
    pub fn has_failures(&self) -> bool {
        self.rows
            .iter()
            .any(|r| matches!(r.status, RowStatus::Failed(_)))
    }
}

struct Cell {
    instance: usize,
    algo: Algorithm,
    seed: u64,
}

fn algo_label(algo: Algorithm, seed: u64, seeds: usize) -> String {
    match algo {
        Algorithm::Exact => "exact".into(),
        Algorithm::Nsga2 if seeds > 1 => format!("nsga2-s{seed}"),
        Algorithm::Nsga2 => "nsga2".into(),
    }
}

fn run_cell(
    plan: &BenchmarkPlan,
    inst: &ProblemInstance,
    algo: Algorithm,
    seed: u64,
) -> (RowStatus, f64, Vec<ObjectiveVector>) {
    let started = Instant::now();
    let outcome = match algo {
        Algorithm::Exact => {
            let cfg = ExactConfig {
                node_limit: plan.node_limit.unwrap_or(u64::MAX),
                time_limit: Some(Duration::from_secs_f64(plan.time_limit_seconds)),
                ..ExactConfig::default()
            };
            epsilon_constraint_front(inst, plan.grid, &cfg)
        }
        Algorithm::Nsga2 => {
            let cfg = NsgaConfig { seed, ..plan.nsga };
            run_nsga2(inst, &cfg).map(|(front, _)| front)
        }
    };
    let seconds = started.elapsed().as_secs_f64();
    match outcome {
        Ok(front) => (RowStatus::Ok, seconds, front.objectives()),
        Err(Error::TimedOut { .. }) => (RowStatus::TimedOut, seconds, Vec::new()),
        Err(e) => (RowStatus::Failed(e.to_string()), seconds, Vec::new()),
    }
}

/// Runs every instance × algorithm × seed cell on `workers` threads, then
/// scores each instance's fronts against their union.
pub fn run_benchmark(plan: &BenchmarkPlan, workers: usize) -> Result<BenchResult> {
    plan.validate()?;
    let names: Vec<String> = plan.instances.iter().map(|s| s.name()).collect();
    let loaded: Vec<Result<ProblemInstance, String>> = plan
        .instances
        .iter()
        .map(|s| s.load().map_err(|e| format!("{e:#}")))
        .collect();

    let mut algos = plan.algorithms.clone();
    algos.sort();
    algos.dedup();
    let mut cells = Vec::new();
    for instance in 0..plan.instances.len() {
        for &algo in &algos {
            match algo {
                Algorithm::Exact => cells.push(Cell {
                    instance,
                    algo,
                    seed: 0,
                }),
                Algorithm::Nsga2 => cells.extend(plan.seeds.iter().map(|&seed| Cell {
                    instance,
                    algo,
                    seed,
                })),
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()?;
    let outcomes: Vec<(RowStatus, f64, Vec<ObjectiveVector>)> = pool.install(|| {
        cells
            .par_iter()
            .map(|c| match &loaded[c.instance] {
                Ok(inst) => run_cell(plan, inst, c.algo, c.seed),
                Err(msg) => (RowStatus::Failed(msg.clone()), 0.0, Vec::new()),
            })
            .collect()
    });

    let mut rows: Vec<BenchRow> = cells
        .iter()
        .zip(outcomes)
        .map(|(c, (status, seconds, front))| BenchRow {
            algo: algo_label(c.algo, c.seed, plan.seeds.len()),
            instance: names[c.instance].clone(),
            status,
            seconds: plan.record_timing.then_some(seconds),
            front,
            report: None,
        })
        .collect();

    let mut start = 0;
    for instance in 0..plan.instances.len() {
        let end = start + cells[start..].iter().take_while(|c| c.instance == instance).count();
        score_instance(&mut rows[start..end], plan.ideal)?;
        start = end;
    }
    Ok(BenchResult { rows })
}

/// Metrics against union-normalized bounds, then SAW across the rows.
fn score_instance(rows: &mut [BenchRow], ideal: IdealPoint) -> Result<()> {
    let done: Vec<usize> = (0..rows.len())
        .filter(|&i| rows[i].status == RowStatus::Ok && !rows[i].front.is_empty())
        .collect();
    if done.is_empty() {
        return Ok(());
    }
    let fronts: Vec<&[ObjectiveVector]> = done.iter().map(|&i| rows[i].front.as_slice()).collect();
    let bounds = NormalizationBounds::from_fronts(&fronts)?;
    let reference = ideal.resolve(&bounds);
    let mut reports = done
        .iter()
        .map(|&i| MetricReport::compute(&rows[i].front, &bounds, &reference, rows[i].seconds))
        .collect::<model_core::Result<Vec<_>>>()?;
    let timed = reports.iter().all(|r| r.cpu_seconds.is_some());
    assign_saw(&mut reports, &SawWeights::equal(timed))?;
    for (&i, r) in done.iter().zip(reports) {
        rows[i].report = Some(r);
    }
    Ok(())
}

/// Worker count from `RELIEF_WORKERS`, else the number of CPUs.
pub fn workers_from_env() -> usize {
    std::env::var("RELIEF_WORKERS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&n: &usize| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}
