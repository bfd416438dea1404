//! Exact Pareto enumeration with the ε-constraint method.
//!
//! The shortage objective is primary. Cost and time are bounded by ε values
//! taken from an evenly spaced grid between the payoff-table ideal and the
//! worst value seen in the payoff table. Every grid cell is solved as a
//! lexicographic problem (shortage, then cost, then time), so each returned
//! point is Pareto-optimal rather than only weakly so.

mod bnb;
mod brute;
mod network;

use std::time::Duration;

use serde::{Deserialize, Serialize};

use model_core::error::{Error, Result};
use model_core::lp::LpOutcome;
use model_core::model::{validate_instance, Objective, ObjectiveVector, ProblemInstance, Solution};
use model_core::pareto::{FrontPoint, ParetoFront};

pub use bnb::ObjectiveBounds;
pub use brute::{brute_force_front, BRUTE_FORCE_LIMIT};
pub use network::{ArcId, FlowObjectiveWeights};

use bnb::Search;
use network::{build_node_lp, Network, NodeState};

/// Whether flows may take any non-negative value or only whole units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlowDomain {
    Continuous,
    /// Whole units of goods. The ε bound on cost breaks the integrality of
    /// the transportation polytope, so this mode branches on flows as well.
    #[default]
    Integral,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactConfig {
    pub flow_domain: FlowDomain,
    /// Search nodes allowed per single-objective solve.
    pub node_limit: u64,
    /// Wall-clock limit for one top-level call.
    pub time_limit: Option<Duration>,
}

impl Default for ExactConfig {
    fn default() -> Self {
        Self {
            flow_domain: FlowDomain::Integral,
            node_limit: 1_000_000,
            time_limit: None,
        }
    }
}

/// Row `r` holds the objective vector at the lexicographic minimizer of
/// objective `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PayoffTable {
    pub rows: [ObjectiveVector; 3],
}

impl PayoffTable {
    /// Best value of `obj` (the diagonal entry).
    pub fn ideal(&self, obj: Objective) -> f64 {
        self.rows[obj.index()].get(obj)
    }

    /// Worst value of `obj` over the rows.
    pub fn anti_ideal(&self, obj: Objective) -> f64 {
        self.rows
            .iter()
            .map(|r| r.get(obj))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Per-objective ε breakpoints for cost and time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsilonGrid {
    pub eps2: Vec<f64>,
    pub eps3: Vec<f64>,
}

fn lex_order(primary: Objective) -> Vec<Objective> {
    let mut order = vec![primary];
    order.extend(Objective::ALL.iter().copied().filter(|o| *o != primary));
    order
}

fn require_valid(inst: &ProblemInstance) -> Result<()> {
    let report = validate_instance(inst);
    if report.feasible {
        Ok(())
    } else {
        let ids: Vec<&str> = report
            .violations
            .iter()
            .map(|v| v.constraint.as_str())
            .collect();
        Err(Error::Infeasible(format!(
            "instance failed validation: {}",
            ids.join(", ")
        )))
    }
}

/// Minimizes each objective separately, breaking ties by minimizing the
/// remaining objectives in their natural order.
pub fn payoff_table(inst: &ProblemInstance, cfg: &ExactConfig) -> Result<PayoffTable> {
    require_valid(inst)?;
    let search = Search::new(inst, cfg);
    payoff_with(&search)
}

fn payoff_with(search: &Search<'_>) -> Result<PayoffTable> {
    let mut rows = [ObjectiveVector::default(); 3];
    for obj in Objective::ALL {
        let (_, v) = search
            .lexicographic(&lex_order(obj), [None; 3])?
            .ok_or_else(|| Error::Infeasible("no feasible solution".into()))?;
        rows[obj.index()] = v;
    }
    Ok(PayoffTable { rows })
}

fn breakpoints(min: f64, anti: f64, n: usize) -> Vec<f64> {
    if anti <= min {
        return vec![min];
    }
    let step = (anti - min) / (n + 1) as f64;
    (1..=n).map(|k| min + k as f64 * step).collect()
}

/// `eps[k] = min + k·(anti − min)/(n + 1)` for `k = 1..n`, separately for
/// cost and time; a degenerate range collapses to `[min]`.
pub fn epsilon_grid(payoff: &PayoffTable, n: usize) -> Result<EpsilonGrid> {
    if n == 0 {
        return Err(Error::Config("grid size must be at least 1".into()));
    }
    Ok(EpsilonGrid {
        eps2: breakpoints(
            payoff.ideal(Objective::Cost),
            payoff.anti_ideal(Objective::Cost),
            n,
        ),
        eps3: breakpoints(
            payoff.ideal(Objective::Time),
            payoff.anti_ideal(Objective::Time),
            n,
        ),
    })
}

/// Exact minimizer of `primary` subject to `f2 ≤ eps2` and `f3 ≤ eps3`
/// (ties broken lexicographically on the other objectives).
///
/// Returns [`Error::Infeasible`] when nothing meets the bounds.
pub fn solve_single_objective(
    inst: &ProblemInstance,
    primary: Objective,
    eps2: f64,
    eps3: f64,
    cfg: &ExactConfig,
) -> Result<Solution> {
    require_valid(inst)?;
    let search = Search::new(inst, cfg);
    let bounds = [None, finite(eps2), finite(eps3)];
    search
        .lexicographic(&lex_order(primary), bounds)?
        .map(|(s, _)| s)
        .ok_or_else(|| Error::Infeasible("no solution within the ε bounds".into()))
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

/// Runs the ε sweep on an `n × n` grid derived from the payoff table.
pub fn epsilon_constraint_front(
    inst: &ProblemInstance,
    n: usize,
    cfg: &ExactConfig,
) -> Result<ParetoFront> {
    require_valid(inst)?;
    let search = Search::new(inst, cfg);
    let payoff = payoff_with(&search)?;
    let grid = epsilon_grid(&payoff, n)?;
    sweep(&search, &grid)
}

/// Runs the ε sweep on an explicit grid.
pub fn epsilon_constraint_front_on_grid(
    inst: &ProblemInstance,
    grid: &EpsilonGrid,
    cfg: &ExactConfig,
) -> Result<ParetoFront> {
    require_valid(inst)?;
    let search = Search::new(inst, cfg);
    sweep(&search, grid)
}

struct CellResult {
    eps2: f64,
    eps3: f64,
    objectives: ObjectiveVector,
    solution: Solution,
}

fn sweep(search: &Search<'_>, grid: &EpsilonGrid) -> Result<ParetoFront> {
    let mut eps2: Vec<f64> = grid.eps2.clone();
    let mut eps3: Vec<f64> = grid.eps3.clone();
    eps2.push(f64::INFINITY);
    eps3.push(f64::INFINITY);
    eps2.sort_by(|a, b| b.total_cmp(a));
    eps3.sort_by(|a, b| b.total_cmp(a));
    eps2.dedup();
    eps3.dedup();

    let lex = lex_order(Objective::Shortage);
    let mut solved: Vec<CellResult> = Vec::new();
    for &e2 in &eps2 {
        for &e3 in &eps3 {
            // The lexicographic optimum of a larger cell that already lies
            // inside this cell is also this cell's optimum.
            let reusable = solved.iter().any(|c| {
                c.eps2 >= e2 && c.eps3 >= e3 && c.objectives.f2 <= e2 && c.objectives.f3 <= e3
            });
            if reusable {
                continue;
            }
            if let Some((solution, objectives)) =
                search.lexicographic(&lex, [None, finite(e2), finite(e3)])?
            {
                solved.push(CellResult {
                    eps2: e2,
                    eps3: e3,
                    objectives,
                    solution,
                });
            }
        }
    }
    Ok(ParetoFront::from_candidates(solved.into_iter().map(|c| {
        FrontPoint {
            objectives: c.objectives,
            solution: c.solution,
        }
    })))
}

/// Continuous-flow optimum of a weighted shortage/transport objective with
/// the open set fixed and flow allowed only on `active_arcs`. Zero flow is
/// always feasible, so an optimum always exists.
pub fn min_cost_transport(
    inst: &ProblemInstance,
    open: &[bool],
    active_arcs: &[ArcId],
    weights: FlowObjectiveWeights,
) -> Result<Solution> {
    if open.len() != inst.dims.centers {
        return Err(Error::Shape("open set length differs from |J|".into()));
    }
    let net = Network::build_filtered(inst, open, FlowDomain::Continuous, |id| {
        active_arcs.contains(id)
    });
    let node = NodeState::root(&net);
    let cost = |a: usize| {
        let arc = &net.arcs[a];
        -weights.shortage * arc.penalty + weights.cost * arc.cost
    };
    let node_lp = build_node_lp(inst, &net, &node, cost, 0.0, &[None; 3])
        .expect("unbounded objectives never reject a node");
    match node_lp.lp.solve() {
        LpOutcome::Optimal { x, .. } => {
            let flows: Vec<f64> = node_lp
                .column
                .iter()
                .map(|c| c.map_or(0.0, |c| if x[c] <= 1e-9 { 0.0 } else { x[c] }))
                .collect();
            let mut sol = net.to_solution(inst, &flows);
            sol.open = open.to_vec();
            Ok(sol)
        }
        other => Err(Error::Infeasible(format!(
            "transport LP did not reach an optimum: {other:?}"
        ))),
    }
}

#[cfg(test)]
mod tests;
