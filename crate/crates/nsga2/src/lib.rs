//! NSGA-II over open-center bits and random-key flow priorities.

mod decode;
mod flow;
mod sort;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, Normal};
use rand_xoshiro::Xoshiro256StarStar;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use model_core::error::{Error, Result};
use model_core::model::{evaluate_objectives, validate_instance, ObjectiveVector, ProblemInstance, Solution};
use model_core::pareto::{FrontPoint, ParetoFront};

pub use decode::{decode, repaired_open_set, Chromosome};
pub use sort::{crowding_distance, fast_nondominated_sort};

/// Spread of the Gaussian key perturbation.
pub const KEY_MUTATION_SIGMA: f64 = 0.1;
/// BLX-α extension of the key interval.
pub const BLEND_ALPHA: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NsgaConfig {
    pub population: usize,
    pub generations: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub seed: u64,
}

impl Default for NsgaConfig {
    fn default() -> Self {
        Self {
            population: 150,
            generations: 50,
            crossover_rate: 0.9,
            mutation_rate: 0.2,
            seed: 0,
        }
    }
}

impl NsgaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population < 4 || self.population % 2 != 0 {
            return Err(Error::Config(format!(
                "population must be even and at least 4, got {}",
                self.population
            )));
        }
        for (name, p) in [
            ("crossover_rate", self.crossover_rate),
            ("mutation_rate", self.mutation_rate),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("{name} must be in [0, 1], got {p}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub chromosome: Chromosome,
    pub solution: Solution,
    pub objectives: ObjectiveVector,
    /// 1 for the non-dominated front.
    pub rank: usize,
    pub crowding: f64,
}

/// One line of the run log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub gen: usize,
    pub best_f1: f64,
    pub best_f2: f64,
    pub best_f3: f64,
    pub front_size: usize,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub wall_seconds: f64,
    pub evaluations: u64,
    pub log: Vec<GenerationRecord>,
}

impl RunStats {
    /// The log as JSON lines.
    pub fn log_lines(&self) -> Result<String> {
        let mut out = String::new();
        for r in &self.log {
            out.push_str(&serde_json::to_string(r)?);
            out.push('\n');
        }
        Ok(out)
    }
}

fn evaluate_all(inst: &ProblemInstance, chroms: Vec<Chromosome>) -> Result<Vec<Individual>> {
    chroms
        .into_par_iter()
        .map(|c| {
            let solution = decode(&c, inst)?;
            let objectives = evaluate_objectives(inst, &solution)?;
            Ok(Individual {
                chromosome: c,
                solution,
                objectives,
                rank: 0,
                crowding: 0.0,
            })
        })
        .collect()
}

/// Assigns rank and crowding to every individual; returns the fronts.
fn rank_population(pop: &mut [Individual]) -> Vec<Vec<usize>> {
    let objs: Vec<ObjectiveVector> = pop.iter().map(|p| p.objectives).collect();
    let fronts = fast_nondominated_sort(&objs);
    for (r, front) in fronts.iter().enumerate() {
        let crowd = crowding_distance(&objs, front);
        for (&idx, c) in front.iter().zip(crowd) {
            pop[idx].rank = r + 1;
            pop[idx].crowding = c;
        }
    }
    fronts
}

fn better(a: &Individual, b: &Individual) -> bool {
    a.rank < b.rank || (a.rank == b.rank && a.crowding > b.crowding)
}

fn tournament<'a>(pop: &'a [Individual], rng: &mut impl Rng) -> &'a Individual {
    let a = &pop[rng.gen_range(0..pop.len())];
    let b = &pop[rng.gen_range(0..pop.len())];
    if better(b, a) {
        b
    } else {
        a
    }
}

fn crossover(a: &Chromosome, b: &Chromosome, rng: &mut impl Rng) -> (Chromosome, Chromosome) {
    let mut c1 = a.clone();
    let mut c2 = b.clone();
    for j in 0..a.open_bits.len() {
        if rng.gen_bool(0.5) {
            c1.open_bits[j] = b.open_bits[j];
            c2.open_bits[j] = a.open_bits[j];
        }
    }
    for m in 0..a.priority_keys.len() {
        for j in 0..a.priority_keys[m].len() {
            for k in 0..a.priority_keys[m][j].len() {
                let (x, y) = (a.priority_keys[m][j][k], b.priority_keys[m][j][k]);
                let lo = x.min(y);
                let span = (x - y).abs();
                let mut blend = || {
                    let u: f64 = rng.gen();
                    (lo - BLEND_ALPHA * span + u * span * (1.0 + 2.0 * BLEND_ALPHA)).clamp(0.0, 1.0)
                };
                c1.priority_keys[m][j][k] = blend();
                c2.priority_keys[m][j][k] = blend();
            }
        }
    }
    (c1, c2)
}

fn mutate(c: &mut Chromosome, rate: f64, rng: &mut impl Rng) {
    let noise = Normal::new(0.0, KEY_MUTATION_SIGMA).expect("valid sigma");
    for bit in &mut c.open_bits {
        if rng.gen_bool(rate) {
            *bit = !*bit;
        }
    }
    for key in c.priority_keys.iter_mut().flatten().flatten() {
        if rng.gen_bool(rate) {
            *key = (*key + noise.sample(rng)).clamp(0.0, 1.0);
        }
    }
}

fn record(gen: usize, pop: &[Individual], started: Instant) -> GenerationRecord {
    let best = |f: fn(&ObjectiveVector) -> f64| {
        pop.iter()
            .map(|p| f(&p.objectives))
            .fold(f64::INFINITY, f64::min)
    };
    GenerationRecord {
        gen,
        best_f1: best(|v| v.f1),
        best_f2: best(|v| v.f2),
        best_f3: best(|v| v.f3),
        front_size: pop.iter().filter(|p| p.rank == 1).count(),
        elapsed_ms: started.elapsed().as_millis() as u64,
    }
}

/// Runs the algorithm and returns the final non-dominated set.
pub fn run_nsga2(inst: &ProblemInstance, cfg: &NsgaConfig) -> Result<(ParetoFront, RunStats)> {
    let (pop, stats) = run_population(inst, cfg)?;
    let front = ParetoFront::from_candidates(pop.into_iter().filter(|p| p.rank == 1).map(|p| {
        FrontPoint {
            objectives: p.objectives,
            solution: p.solution,
        }
    }));
    Ok((front, stats))
}

/// Runs the algorithm and returns the whole final population.
pub fn run_population(
    inst: &ProblemInstance,
    cfg: &NsgaConfig,
) -> Result<(Vec<Individual>, RunStats)> {
    cfg.validate()?;
    let report = validate_instance(inst);
    if !report.feasible {
        return Err(Error::Infeasible("instance failed validation".into()));
    }
    let started = Instant::now();
    let n = cfg.population;
    let mut rng = Xoshiro256StarStar::seed_from_u64(cfg.seed);
    let init: Vec<Chromosome> = (0..n).map(|_| Chromosome::random(inst, &mut rng)).collect();
    let mut pop = evaluate_all(inst, init)?;
    let mut evaluations = n as u64;
    rank_population(&mut pop);
    let mut log = vec![record(0, &pop, started)];

    for gen in 1..=cfg.generations {
        let mut children = Vec::with_capacity(n);
        while children.len() < n {
            let a = tournament(&pop, &mut rng).chromosome.clone();
            let b = tournament(&pop, &mut rng).chromosome.clone();
            let (mut c1, mut c2) = if rng.gen_bool(cfg.crossover_rate) {
                crossover(&a, &b, &mut rng)
            } else {
                (a, b)
            };
            mutate(&mut c1, cfg.mutation_rate, &mut rng);
            mutate(&mut c2, cfg.mutation_rate, &mut rng);
            children.push(c1);
            children.push(c2);
        }
        let offspring = evaluate_all(inst, children)?;
        evaluations += n as u64;

        let mut merged = pop;
        merged.extend(offspring);
        let fronts = rank_population(&mut merged);
        let mut keep: Vec<usize> = Vec::with_capacity(n);
        for front in fronts {
            if keep.len() + front.len() <= n {
                keep.extend(front);
            } else {
                let mut rest = front;
                rest.sort_by(|&a, &b| merged[b].crowding.total_cmp(&merged[a].crowding));
                keep.extend(rest.into_iter().take(n - keep.len()));
                break;
            }
        }
        let mut slots: Vec<Option<Individual>> = merged.into_iter().map(Some).collect();
        pop = keep
            .into_iter()
            .map(|i| slots[i].take().expect("kept once"))
            .collect();
        rank_population(&mut pop);
        log.push(record(gen, &pop, started));
    }
    Ok((
        pop,
        RunStats {
            wall_seconds: started.elapsed().as_secs_f64(),
            evaluations,
            log,
        },
    ))
}
