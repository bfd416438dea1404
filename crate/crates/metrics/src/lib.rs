//! Front quality metrics and simple additive weighting.

use serde::{Deserialize, Serialize};

use model_core::error::{Error, Result};
use model_core::model::ObjectiveVector;

pub use model_core::pareto::dominates;

/// Per-objective `(min, max)` over the union of compared fronts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizationBounds {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

impl NormalizationBounds {
    pub fn from_fronts(fronts: &[&[ObjectiveVector]]) -> Result<Self> {
        let mut min = [f64::INFINITY; 3];
        let mut max = [f64::NEG_INFINITY; 3];
        for p in fronts.iter().flat_map(|f| f.iter()) {
            for (o, x) in p.as_array().into_iter().enumerate() {
                min[o] = min[o].min(x);
                max[o] = max[o].max(x);
            }
        }
        if min[0].is_infinite() {
            return Err(Error::Empty);
        }
        Ok(Self { min, max })
    }

    /// Per-objective minimum.
    pub fn ideal(&self) -> ObjectiveVector {
        ObjectiveVector::from_array(self.min)
    }

    /// Scales a difference along objective `o`; zero range gives zero.
    fn scale(&self, o: usize, delta: f64) -> f64 {
        let range = self.max[o] - self.min[o];
        if range > 0.0 {
            delta / range
        } else {
            0.0
        }
    }

    fn normalize(&self, p: &ObjectiveVector) -> [f64; 3] {
        let a = p.as_array();
        [0, 1, 2].map(|o| self.scale(o, a[o] - self.min[o]))
    }
}

/// Reference point for [`mid`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdealPoint {
    #[default]
    Minimum,
    Origin,
}

impl IdealPoint {
    pub fn resolve(self, bounds: &NormalizationBounds) -> ObjectiveVector {
        match self {
            IdealPoint::Minimum => bounds.ideal(),
            IdealPoint::Origin => ObjectiveVector::default(),
        }
    }
}

fn non_empty(front: &[ObjectiveVector]) -> Result<()> {
    if front.is_empty() {
        Err(Error::Empty)
    } else {
        Ok(())
    }
}

fn norm(v: [f64; 3]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Mean distance from the ideal point in normalized objective space.
pub fn mid(
    front: &[ObjectiveVector],
    bounds: &NormalizationBounds,
    ideal: &ObjectiveVector,
) -> Result<f64> {
    non_empty(front)?;
    let best = ideal.as_array();
    let total: f64 = front
        .iter()
        .map(|p| {
            let a = p.as_array();
            norm([0, 1, 2].map(|o| bounds.scale(o, a[o] - best[o])))
        })
        .sum();
    Ok(total / front.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spacing {
    pub value: f64,
    /// Fewer than three points, or all points coincide; `value` is 0.
    pub undefined: bool,
}

/// `Σ|d̄ − d_i| / ((n − 1)·d̄)` over nearest-neighbour distances in
/// normalized space.
pub fn spacing(front: &[ObjectiveVector], bounds: &NormalizationBounds) -> Spacing {
    let undefined = Spacing {
        value: 0.0,
        undefined: true,
    };
    let n = front.len();
    if n < 3 {
        return undefined;
    }
    let pts: Vec<[f64; 3]> = front.iter().map(|p| bounds.normalize(p)).collect();
    let d: Vec<f64> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| norm([0, 1, 2].map(|o| pts[i][o] - pts[j][o])))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let mean = d.iter().sum::<f64>() / n as f64;
    if mean <= 0.0 {
        return undefined;
    }
    let dev: f64 = d.iter().map(|x| (mean - x).abs()).sum();
    Spacing {
        value: dev / ((n - 1) as f64 * mean),
        undefined: false,
    }
}

/// Norm of the front's normalized per-objective ranges.
pub fn diversification(front: &[ObjectiveVector], bounds: &NormalizationBounds) -> Result<f64> {
    non_empty(front)?;
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in front {
        for (o, x) in p.as_array().into_iter().enumerate() {
            lo[o] = lo[o].min(x);
            hi[o] = hi[o].max(x);
        }
    }
    Ok(norm([0, 1, 2].map(|o| bounds.scale(o, hi[o] - lo[o]))))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub mid: f64,
    pub sm: f64,
    pub dm: f64,
    /// `None` when timing is not recorded.
    pub cpu_seconds: Option<f64>,
    pub saw: f64,
    pub n_points: usize,
    pub sm_undefined: bool,
}

impl MetricReport {
    /// MID, SM and DM of one front; `saw` is filled by [`saw_score`].
    pub fn compute(
        front: &[ObjectiveVector],
        bounds: &NormalizationBounds,
        ideal: &ObjectiveVector,
        cpu_seconds: Option<f64>,
    ) -> Result<Self> {
        let sm = spacing(front, bounds);
        Ok(Self {
            mid: mid(front, bounds, ideal)?,
            sm: sm.value,
            dm: diversification(front, bounds)?,
            cpu_seconds,
            saw: 0.0,
            n_points: front.len(),
            sm_undefined: sm.undefined,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SawWeights {
    pub mid: f64,
    pub sm: f64,
    pub dm: f64,
    pub cpu: f64,
}

impl SawWeights {
    /// Equal weights over MID, SM, DM and, if `with_time`, CPU time.
    pub fn equal(with_time: bool) -> Self {
        let w = if with_time { 0.25 } else { 1.0 / 3.0 };
        Self {
            mid: w,
            sm: w,
            dm: w,
            cpu: if with_time { w } else { 0.0 },
        }
    }
}

impl Default for SawWeights {
    fn default() -> Self {
        Self::equal(true)
    }
}

/// `min/x` for lower-is-better columns; an all-zero column scores 1.
fn cost_column(xs: &[f64]) -> Vec<f64> {
    let min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    xs.iter()
        .map(|&x| if x <= 0.0 { 1.0 } else { min / x })
        .collect()
}

/// `x/max` for higher-is-better columns; an all-zero column scores 1.
fn benefit_column(xs: &[f64]) -> Vec<f64> {
    let max = xs.iter().copied().fold(0.0, f64::max);
    xs.iter()
        .map(|&x| if max <= 0.0 { 1.0 } else { x / max })
        .collect()
}

/// Weighted sum of normalized metrics for each report; higher is better.
/// When any report lacks a CPU time the CPU column scores 1 for all.
pub fn saw_score(reports: &[MetricReport], weights: &SawWeights) -> Result<Vec<f64>> {
    if reports.is_empty() {
        return Err(Error::Empty);
    }
    let col = |f: fn(&MetricReport) -> f64| reports.iter().map(f).collect::<Vec<f64>>();
    let mid = cost_column(&col(|r| r.mid));
    let sm = cost_column(&col(|r| r.sm));
    let dm = benefit_column(&col(|r| r.dm));
    let cpu = match reports.iter().map(|r| r.cpu_seconds).collect::<Option<Vec<f64>>>() {
        Some(t) => cost_column(&t),
        None => vec![1.0; reports.len()],
    };
    Ok((0..reports.len())
        .map(|i| weights.mid * mid[i] + weights.sm * sm[i] + weights.dm * dm[i] + weights.cpu * cpu[i])
        .collect())
}

/// Fills `saw` of every report in place.
pub fn assign_saw(reports: &mut [MetricReport], weights: &SawWeights) -> Result<()> {
    let scores = saw_score(reports, weights)?;
    for (r, s) in reports.iter_mut().zip(scores) {
        r.saw = s;
    }
    Ok(())
}
