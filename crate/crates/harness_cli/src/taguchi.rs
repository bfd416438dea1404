//! Three-level Taguchi tuning with the lower-is-better signal-to-noise ratio.

use anyhow::{bail, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use metrics::{saw_score, IdealPoint, MetricReport, NormalizationBounds, SawWeights};
use model_core::model::{ObjectiveVector, ProblemInstance};
use nsga2::{run_nsga2, NsgaConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Factor {
    pub name: String,
    pub levels: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DesignKind {
    #[default]
    FullFactorial,
    L9,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaguchiDesign {
    pub factors: Vec<Factor>,
    pub kind: DesignKind,
    pub replications: usize,
}

/// The L9(3^4) orthogonal array, level indices per column.
const L9: [[usize; 4]; 9] = [
    [0, 0, 0, 0],
    [0, 1, 1, 1],
    [0, 2, 2, 2],
    [1, 0, 1, 2],
    [1, 1, 2, 0],
    [1, 2, 0, 1],
    [2, 0, 2, 1],
    [2, 1, 0, 2],
    [2, 2, 1, 0],
];

impl Default for TaguchiDesign {
    /// Crossover, mutation and population at three levels each.
    fn default() -> Self {
        let f = |name: &str, levels| Factor {
            name: name.into(),
            levels,
        };
        Self {
            factors: vec![
                f("crossover_rate", [0.9, 0.75, 0.65]),
                f("mutation_rate", [0.3, 0.2, 0.1]),
                f("population", [150.0, 100.0, 50.0]),
            ],
            kind: DesignKind::FullFactorial,
            replications: 3,
        }
    }
}

impl TaguchiDesign {
    /// Level index of every factor, one entry per run row.
    pub fn rows(&self) -> Result<Vec<Vec<usize>>> {
        let n = self.factors.len();
        if n == 0 {
            bail!("design has no factors");
        }
        if self.replications == 0 {
            bail!("replications must be at least 1");
        }
        match self.kind {
            DesignKind::FullFactorial => Ok((0..3usize.pow(n as u32))
                .map(|mut r| {
                    let mut levels = vec![0; n];
                    for l in levels.iter_mut().rev() {
                        *l = r % 3;
                        r /= 3;
                    }
                    levels
                })
                .collect()),
            DesignKind::L9 if n <= 4 => Ok(L9.iter().map(|row| row[..n].to_vec()).collect()),
            DesignKind::L9 => bail!("L9 holds at most 4 factors, got {n}"),
        }
    }

    fn values(&self, levels: &[usize]) -> Vec<f64> {
        self.factors
            .iter()
            .zip(levels)
            .map(|(f, &l)| f.levels[l])
            .collect()
    }
}

/// `-10·log10(mean(y²))`.
pub fn sn_lower_better(ys: &[f64]) -> f64 {
    let mean = ys.iter().map(|y| y * y).sum::<f64>() / ys.len() as f64;
    -10.0 * mean.log10()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowResult {
    pub levels: Vec<usize>,
    pub values: Vec<f64>,
    pub responses: Vec<f64>,
    pub sn: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuningResult {
    pub rows: Vec<RowResult>,
    /// Mean S/N per factor and level.
    pub main_effects: Vec<[f64; 3]>,
    pub best_levels: Vec<usize>,
    pub best_values: Vec<f64>,
}

/// Main-effects analysis of the S/N ratio of `response(values, replicate)`.
pub fn tune_with(
    design: &TaguchiDesign,
    response: impl Fn(&[f64], usize) -> f64,
) -> Result<TuningResult> {
    let rows: Vec<RowResult> = design
        .rows()?
        .into_iter()
        .map(|levels| {
            let values = design.values(&levels);
            let responses: Vec<f64> = (0..design.replications)
                .map(|r| response(&values, r))
                .collect();
            RowResult {
                sn: sn_lower_better(&responses),
                levels,
                values,
                responses,
            }
        })
        .collect();
    Ok(analyse(design, rows))
}

fn analyse(design: &TaguchiDesign, rows: Vec<RowResult>) -> TuningResult {
    let n = design.factors.len();
    let mut main_effects = vec![[0.0; 3]; n];
    for (f, effect) in main_effects.iter_mut().enumerate() {
        for (l, e) in effect.iter_mut().enumerate() {
            let sns: Vec<f64> = rows
                .iter()
                .filter(|r| r.levels[f] == l)
                .map(|r| r.sn)
                .collect();
            *e = sns.iter().sum::<f64>() / sns.len() as f64;
        }
    }
    // Ties keep the first listed level.
    let best_levels: Vec<usize> = main_effects
        .iter()
        .map(|e| (0..3).fold(0, |b, l| if e[l] > e[b] { l } else { b }))
        .collect();
    let best_values = design.values(&best_levels);
    TuningResult {
        rows,
        main_effects,
        best_levels,
        best_values,
    }
}

/// `base` with every factor named after an [`NsgaConfig`] field replaced.
pub fn apply_factors(base: NsgaConfig, design: &TaguchiDesign, values: &[f64]) -> Result<NsgaConfig> {
    let mut cfg = base;
    for (f, &v) in design.factors.iter().zip(values) {
        match f.name.as_str() {
            "crossover_rate" => cfg.crossover_rate = v,
            "mutation_rate" => cfg.mutation_rate = v,
            "population" => cfg.population = v.round() as usize,
            "generations" => cfg.generations = v.round() as usize,
            other => bail!("unknown factor {other}"),
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Tunes NSGA-II on `instances`. Every row and replicate is run on every
/// instance; per instance the runs are scored by SAW over MID, SM and DM,
/// and the response is the mean of `1 / SAW` over instances.
pub fn taguchi_tune(
    design: &TaguchiDesign,
    instances: &[ProblemInstance],
    base: NsgaConfig,
) -> Result<(NsgaConfig, TuningResult)> {
    if instances.is_empty() {
        bail!("no training instances");
    }
    let rows = design.rows()?;
    let configs = rows
        .iter()
        .map(|levels| apply_factors(base, design, &design.values(levels)))
        .collect::<Result<Vec<_>>>()?;
    let reps = design.replications;
    let runs: Vec<(usize, usize, usize)> = (0..rows.len())
        .flat_map(|r| (0..reps).flat_map(move |k| (0..instances.len()).map(move |i| (r, k, i))))
        .collect();
    let fronts: Vec<Vec<ObjectiveVector>> = runs
        .par_iter()
        .map(|&(r, k, i)| {
            let cfg = NsgaConfig {
                seed: base.seed.wrapping_add(k as u64),
                ..configs[r]
            };
            run_nsga2(&instances[i], &cfg).map(|(f, _)| f.objectives())
        })
        .collect::<model_core::Result<_>>()?;

    let mut response = vec![vec![0.0; reps]; rows.len()];
    for i in 0..instances.len() {
        let idx: Vec<usize> = (0..runs.len()).filter(|&x| runs[x].2 == i).collect();
        let slices: Vec<&[ObjectiveVector]> = idx.iter().map(|&x| fronts[x].as_slice()).collect();
        let bounds = NormalizationBounds::from_fronts(&slices)?;
        let ideal = IdealPoint::Minimum.resolve(&bounds);
        let reports = slices
            .iter()
            .map(|f| MetricReport::compute(f, &bounds, &ideal, None))
            .collect::<model_core::Result<Vec<_>>>()?;
        let saw = saw_score(&reports, &SawWeights::equal(false))?;
        for (&x, s) in idx.iter().zip(saw) {
            let (r, k, _) = runs[x];
            response[r][k] += 1.0 / s / instances.len() as f64;
        }
    }
    let results = rows
        .into_iter()
        .zip(response)
        .map(|(levels, responses)| RowResult {
            values: design.values(&levels),
            sn: sn_lower_better(&responses),
            levels,
            responses,
        })
        .collect();
    let result = analyse(design, results);
    let cfg = apply_factors(base, design, &result.best_values)?;
    Ok((cfg, result))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_response_sn() {
        assert!((sn_lower_better(&[2.0, 2.0, 2.0]) + 6.0206).abs() < 1e-3);
    }

    #[test]
    fn design_sizes() {
        let mut d = TaguchiDesign::default();
        assert_eq!(d.rows().unwrap().len(), 27);
        d.kind = DesignKind::L9;
        let rows = d.rows().unwrap();
        assert_eq!(rows.len(), 9);
        // Each level of each factor appears three times.
        for f in 0..3 {
            for l in 0..3 {
                assert_eq!(rows.iter().filter(|r| r[f] == l).count(), 3);
            }
        }
        d.factors.clear();
        assert!(d.rows().is_err());
    }

    #[test]
    fn planted_levels_are_found() {
        let d = TaguchiDesign::default();
        let planted = [1, 2, 0];
        let res = tune_with(&d, |values, _| {
            1.0 + (0..3)
                .map(|f| (d.factors[f].levels[planted[f]] - values[f]).abs())
                .sum::<f64>()
        })
        .unwrap();
        assert_eq!(res.best_levels, planted);
    }

    #[test]
    fn factors_map_onto_the_config() {
        let d = TaguchiDesign::default();
        let cfg = apply_factors(NsgaConfig::default(), &d, &[0.75, 0.1, 50.0]).unwrap();
        assert_eq!((cfg.crossover_rate, cfg.mutation_rate, cfg.population), (0.75, 0.1, 50));
    }
}
