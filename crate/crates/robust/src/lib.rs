//! Trapezoidal fuzzy parameters and the robust possibilistic objective.
//!
//! Two-point fuzzy values `(x1, x2)` are stored as trapezoids
//! `(x1, x1, x2, x2)`. Right-hand sides at confidence level `l` use
//! `(1 - l)·p4 + l·p1`, so `l = 1` is the conservative end.

mod linearize;

use serde::{Deserialize, Serialize};

use model_core::error::{Error, Result};
use model_core::model::{validate_instance, ProblemInstance, Solution, SCHEMA_VERSION};

pub use linearize::{
    feasible_interval, linearize_products, BilinearModel, LinearConstraint, LinearizedModel,
    VarKind,
};

/// `(p1, p2, p3, p4)` with `p1 ≤ p2 ≤ p3 ≤ p4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct Trapezoid {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub p4: f64,
}

impl Trapezoid {
    pub fn new(p1: f64, p2: f64, p3: f64, p4: f64) -> Result<Self> {
        let ok = [p1, p2, p3, p4].iter().all(|x| x.is_finite()) && p1 <= p2 && p2 <= p3 && p3 <= p4;
        if ok {
            Ok(Self { p1, p2, p3, p4 })
        } else {
            Err(Error::Range(format!(
                "trapezoid points out of order: ({p1}, {p2}, {p3}, {p4})"
            )))
        }
    }

    pub fn crisp(x: f64) -> Self {
        Self {
            p1: x,
            p2: x,
            p3: x,
            p4: x,
        }
    }

    pub fn two_point(low: f64, high: f64) -> Result<Self> {
        Self::new(low, low, high, high)
    }

    /// `(1 - level)·p4 + level·p1`.
    pub fn at_level(&self, level: f64) -> f64 {
        (1.0 - level) * self.p4 + level * self.p1
    }
}

impl TryFrom<[f64; 4]> for Trapezoid {
    type Error = Error;

    fn try_from(p: [f64; 4]) -> Result<Self> {
        Self::new(p[0], p[1], p[2], p[3])
    }
}

impl From<Trapezoid> for [f64; 4] {
    fn from(t: Trapezoid) -> Self {
        [t.p1, t.p2, t.p3, t.p4]
    }
}

pub fn expected_value(t: &Trapezoid) -> f64 {
    (t.p1 + t.p2 + t.p3 + t.p4) / 4.0
}

/// Fuzzy counterparts of the uncertain instance parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzyParams {
    pub setup_cost: Vec<Trapezoid>,
    pub shortage_penalty: Vec<Trapezoid>,
    pub demand: Vec<Vec<Trapezoid>>,
    pub supply: Vec<Vec<Trapezoid>>,
    pub cost_in: Vec<Vec<Trapezoid>>,
    pub cost_out: Vec<Vec<Trapezoid>>,
    pub cap_in: Vec<Vec<Trapezoid>>,
    pub cap_out: Vec<Vec<Trapezoid>>,
}

/// A crisp skeleton (times, distances, vehicles, budget) plus fuzzy
/// parameters. The skeleton's values for the fuzzy fields are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzyInstance {
    #[serde(flatten)]
    pub base: ProblemInstance,
    pub fuzzy_params: FuzzyParams,
}

fn lift_vec(v: &[f64]) -> Vec<Trapezoid> {
    v.iter().map(|x| Trapezoid::crisp(*x)).collect()
}

fn lift_mat(m: &[Vec<f64>]) -> Vec<Vec<Trapezoid>> {
    m.iter().map(|r| lift_vec(r)).collect()
}

fn mat_shape<T>(m: &[Vec<T>], rows: usize, cols: usize) -> bool {
    m.len() == rows && m.iter().all(|r| r.len() == cols)
}

impl FuzzyInstance {
    /// Every fuzzy parameter degenerate at the instance's crisp value.
    pub fn from_crisp(inst: &ProblemInstance) -> Self {
        Self {
            base: inst.clone(),
            fuzzy_params: FuzzyParams {
                setup_cost: lift_vec(&inst.setup_cost),
                shortage_penalty: lift_vec(&inst.shortage_penalty),
                demand: lift_mat(&inst.demand),
                supply: lift_mat(&inst.supply),
                cost_in: lift_mat(&inst.cost_in),
                cost_out: lift_mat(&inst.cost_out),
                cap_in: lift_mat(&inst.cap_in),
                cap_out: lift_mat(&inst.cap_out),
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.base.dims;
        let f = &self.fuzzy_params;
        let ok = f.setup_cost.len() == d.centers
            && f.shortage_penalty.len() == d.affected
            && mat_shape(&f.demand, d.vehicles, d.affected)
            && mat_shape(&f.supply, d.vehicles, d.supply)
            && mat_shape(&f.cost_in, d.supply, d.centers)
            && mat_shape(&f.cost_out, d.centers, d.affected)
            && mat_shape(&f.cap_in, d.supply, d.centers)
            && mat_shape(&f.cap_out, d.centers, d.affected);
        if !ok {
            return Err(Error::Shape("fuzzy parameters do not match dims".into()));
        }
        let all = f
            .setup_cost
            .iter()
            .chain(&f.shortage_penalty)
            .chain(f.demand.iter().flatten())
            .chain(f.supply.iter().flatten())
            .chain(f.cost_in.iter().flatten())
            .chain(f.cost_out.iter().flatten())
            .chain(f.cap_in.iter().flatten())
            .chain(f.cap_out.iter().flatten());
        for t in all {
            Trapezoid::new(t.p1, t.p2, t.p3, t.p4)?;
            if t.p1 < 0.0 {
                return Err(Error::Range("fuzzy parameters must be non-negative".into()));
            }
        }
        Ok(())
    }
}

/// Robustness weight, penalty weights and confidence levels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RppWeights {
    /// Weight on `Zmax - Zmin`.
    pub robustness: f64,
    /// Supply penalty weight, paired with `alpha`.
    pub supply_penalty: f64,
    /// Demand penalty weight, paired with `beta`.
    pub demand_penalty: f64,
    /// Inbound capacity penalty weight, paired with `mu`.
    pub cap_in_penalty: f64,
    /// Outbound capacity penalty weight, paired with `rho`.
    pub cap_out_penalty: f64,
    /// Second demand penalty weight, paired with `phi`.
    pub demand_penalty_2: f64,
    /// Second supply penalty weight, paired with `varphi`.
    pub supply_penalty_2: f64,
    pub alpha: f64,
    pub beta: f64,
    pub mu: f64,
    pub rho: f64,
    pub phi: f64,
    pub varphi: f64,
}

impl Default for RppWeights {
    /// All weights zero, all levels one.
    fn default() -> Self {
        Self {
            robustness: 0.0,
            supply_penalty: 0.0,
            demand_penalty: 0.0,
            cap_in_penalty: 0.0,
            cap_out_penalty: 0.0,
            demand_penalty_2: 0.0,
            supply_penalty_2: 0.0,
            alpha: 1.0,
            beta: 1.0,
            mu: 1.0,
            rho: 1.0,
            phi: 1.0,
            varphi: 1.0,
        }
    }
}

impl RppWeights {
    pub fn validate(&self) -> Result<()> {
        let weights = [
            self.robustness,
            self.supply_penalty,
            self.demand_penalty,
            self.cap_in_penalty,
            self.cap_out_penalty,
            self.demand_penalty_2,
            self.supply_penalty_2,
        ];
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::Config("weights must be non-negative".into()));
        }
        let levels = [self.alpha, self.beta, self.mu, self.rho, self.phi, self.varphi];
        if levels.iter().any(|l| !(0.5..=1.0).contains(l)) {
            return Err(Error::Config("confidence levels must lie in [0.5, 1]".into()));
        }
        Ok(())
    }
}

fn check_solution(inst: &FuzzyInstance, sol: &Solution) -> Result<()> {
    let d = inst.base.dims;
    let ok = sol.open.len() == d.centers
        && sol.flow_in.len() == d.vehicles
        && sol.flow_in.iter().all(|q| mat_shape(q, d.supply, d.centers))
        && sol.flow_out.len() == d.vehicles
        && sol.flow_out.iter().all(|y| mat_shape(y, d.centers, d.affected));
    if ok {
        Ok(())
    } else {
        Err(Error::Shape("solution does not match the fuzzy instance".into()))
    }
}

/// The cost objective with every fuzzy coefficient replaced by `pick(t)`.
fn cost_with(inst: &FuzzyInstance, sol: &Solution, pick: impl Fn(&Trapezoid) -> f64) -> f64 {
    let d = inst.base.dims;
    let f = &inst.fuzzy_params;
    let mut total = 0.0;
    for m in 0..d.vehicles {
        for i in 0..d.supply {
            for j in 0..d.centers {
                total += pick(&f.cost_in[i][j]) * sol.flow_in[m][i][j];
            }
        }
        for j in 0..d.centers {
            for k in 0..d.affected {
                total += pick(&f.cost_out[j][k]) * sol.flow_out[m][j][k];
            }
        }
    }
    for j in (0..d.centers).filter(|&j| sol.open[j]) {
        total += pick(&f.setup_cost[j]);
    }
    total
}

/// `(Zmin, Zmax)`: the cost objective at every coefficient's `p1` and `p4`.
pub fn z_extremes(inst: &FuzzyInstance, sol: &Solution) -> Result<(f64, f64)> {
    check_solution(inst, sol)?;
    Ok((cost_with(inst, sol, |t| t.p1), cost_with(inst, sol, |t| t.p4)))
}

/// The cost objective at expected coefficient values.
pub fn expected_cost(inst: &FuzzyInstance, sol: &Solution) -> Result<f64> {
    check_solution(inst, sol)?;
    Ok(cost_with(inst, sol, expected_value))
}

/// Shortage cost against expected demand, priced at expected penalties.
pub fn expected_shortage_cost(inst: &FuzzyInstance, sol: &Solution) -> Result<f64> {
    check_solution(inst, sol)?;
    let d = inst.base.dims;
    let f = &inst.fuzzy_params;
    let mut total = 0.0;
    for m in 0..d.vehicles {
        for k in 0..d.affected {
            let delivered: f64 = (0..d.centers).map(|j| sol.flow_out[m][j][k]).sum();
            let gap = (expected_value(&f.demand[m][k]) - delivered).max(0.0);
            total += expected_value(&f.shortage_penalty[k]) * gap;
        }
    }
    Ok(total)
}

/// `(1 - level)·p4 + level·p1 - p1`, the feasibility-robustness gap.
fn gap(t: &Trapezoid, level: f64) -> f64 {
    t.at_level(level) - t.p1
}

/// Penalty terms that do not depend on the solution, and the per-center
/// terms that apply when a center is open.
fn penalty_parts(inst: &FuzzyInstance, w: &RppWeights) -> (f64, Vec<f64>) {
    let d = inst.base.dims;
    let f = &inst.fuzzy_params;
    let mut constant = 0.0;
    for row in &f.supply {
        for s in row {
            constant += w.supply_penalty * gap(s, w.alpha) + w.supply_penalty_2 * gap(s, w.varphi);
        }
    }
    for row in &f.demand {
        for dm in row {
            constant += w.demand_penalty * gap(dm, w.beta) + w.demand_penalty_2 * gap(dm, w.phi);
        }
    }
    for row in &f.cap_out {
        for n in row {
            constant += w.cap_out_penalty * gap(n, w.rho);
        }
    }
    let per_center = (0..d.centers)
        .map(|j| {
            let inbound: f64 = (0..d.supply).map(|i| gap(&f.cap_in[i][j], w.mu)).sum();
            w.cap_in_penalty * inbound
        })
        .collect();
    (constant, per_center)
}

/// Expected cost, plus `robustness · (Zmax - Zmin)`, plus the
/// feasibility-robustness penalties. The inbound capacity penalty counts only
/// for open centers.
pub fn rpp_objective(inst: &FuzzyInstance, sol: &Solution, w: &RppWeights) -> Result<f64> {
    w.validate()?;
    let expected = expected_cost(inst, sol)?;
    let (zmin, zmax) = z_extremes(inst, sol)?;
    let (constant, per_center) = penalty_parts(inst, w);
    let gated: f64 = per_center
        .iter()
        .zip(&sol.open)
        .filter(|(_, o)| **o)
        .map(|(p, _)| p)
        .sum();
    Ok(expected + w.robustness * (zmax - zmin) + constant + gated)
}

/// What a crisp solver needs on top of the crisp instance to score the full
/// robust objective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RppDescriptor {
    pub robustness: f64,
    /// `p4 - p1` of the inbound costs.
    pub spread_in: Vec<Vec<f64>>,
    pub spread_out: Vec<Vec<f64>>,
    pub spread_setup: Vec<f64>,
    /// Penalty terms independent of the solution.
    pub constant: f64,
    /// Penalty added when center `j` is open.
    pub center_penalty: Vec<f64>,
}

impl RppDescriptor {
    /// Full robust objective of `sol`, where `crisp` came from
    /// [`build_crisp_instance`].
    pub fn evaluate(&self, crisp: &ProblemInstance, sol: &Solution) -> Result<f64> {
        let f2 = model_core::model::evaluate_objectives(crisp, sol)?.f2;
        let d = crisp.dims;
        let mut spread = 0.0;
        for m in 0..d.vehicles {
            for i in 0..d.supply {
                for j in 0..d.centers {
                    spread += self.spread_in[i][j] * sol.flow_in[m][i][j];
                }
            }
            for j in 0..d.centers {
                for k in 0..d.affected {
                    spread += self.spread_out[j][k] * sol.flow_out[m][j][k];
                }
            }
        }
        let mut gated = 0.0;
        for j in (0..d.centers).filter(|&j| sol.open[j]) {
            spread += self.spread_setup[j];
            gated += self.center_penalty[j];
        }
        Ok(f2 + self.robustness * spread + self.constant + gated)
    }
}

fn map_vec(v: &[Trapezoid], f: impl Fn(&Trapezoid) -> f64) -> Vec<f64> {
    v.iter().map(f).collect()
}

fn map_mat(m: &[Vec<Trapezoid>], f: impl Fn(&Trapezoid) -> f64 + Copy) -> Vec<Vec<f64>> {
    m.iter().map(|r| map_vec(r, f)).collect()
}

/// Crisp instance with expected-value costs and right-hand sides at their
/// confidence levels, plus the descriptor of the remaining robust terms.
pub fn build_crisp_instance(
    inst: &FuzzyInstance,
    w: &RppWeights,
) -> Result<(ProblemInstance, RppDescriptor)> {
    inst.validate()?;
    w.validate()?;
    let f = &inst.fuzzy_params;
    let mut crisp = inst.base.clone();
    crisp.setup_cost = map_vec(&f.setup_cost, expected_value);
    crisp.shortage_penalty = map_vec(&f.shortage_penalty, expected_value);
    crisp.cost_in = map_mat(&f.cost_in, expected_value);
    crisp.cost_out = map_mat(&f.cost_out, expected_value);
    crisp.supply = map_mat(&f.supply, |t| t.at_level(w.alpha));
    crisp.demand = map_mat(&f.demand, |t| t.at_level(w.beta));
    crisp.cap_in = map_mat(&f.cap_in, |t| t.at_level(w.mu));
    crisp.cap_out = map_mat(&f.cap_out, |t| t.at_level(w.rho));
    let report = validate_instance(&crisp);
    if !report.feasible {
        return Err(Error::Shape("crisp instance failed validation".into()));
    }
    let spread = |t: &Trapezoid| t.p4 - t.p1;
    let (constant, center_penalty) = penalty_parts(inst, w);
    Ok((
        crisp,
        RppDescriptor {
            robustness: w.robustness,
            spread_in: map_mat(&f.cost_in, spread),
            spread_out: map_mat(&f.cost_out, spread),
            spread_setup: map_vec(&f.setup_cost, spread),
            constant,
            center_penalty,
        },
    ))
}

/// On-disk form of a fuzzy instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzyFile {
    pub schema_version: u32,
    pub fuzzy: bool,
    #[serde(flatten)]
    pub instance: FuzzyInstance,
    #[serde(default)]
    pub weights: RppWeights,
}

impl FuzzyFile {
    pub fn new(instance: FuzzyInstance, weights: RppWeights) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            fuzzy: true,
            instance,
            weights,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: Self = serde_json::from_str(text)?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported schema_version {}",
                file.schema_version
            )));
        }
        if !file.fuzzy {
            return Err(Error::Config("not a fuzzy instance file".into()));
        }
        file.instance.validate()?;
        file.weights.validate()?;
        Ok(file)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[cfg(test)]
mod tests;
