//! Exhaustive integer-flow enumeration, used as a test oracle.
//!
//! Vehicle classes share nothing but the open set, so each class is
//! enumerated on its own and the per-class fronts are combined by Minkowski
//! sum. Dominated partial sums can never complete to a non-dominated total,
//! which keeps the combination step small.

use model_core::error::{Error, Result};
use model_core::model::{evaluate_objectives, ObjectiveVector, ProblemInstance};
use model_core::pareto::{lex_cmp, weakly_dominates_within, FrontPoint, ParetoFront, DEDUP_TOL};

use super::bnb::OpenSets;
use super::network::ArcId;

/// Enumeration steps allowed before giving up with [`Error::TooLarge`].
pub const BRUTE_FORCE_LIMIT: u64 = 10_000_000;

struct Budget {
    used: u64,
}

impl Budget {
    fn spend(&mut self, n: u64) -> Result<()> {
        self.used += n;
        if self.used > BRUTE_FORCE_LIMIT {
            Err(Error::TooLarge {
                limit: BRUTE_FORCE_LIMIT,
            })
        } else {
            Ok(())
        }
    }
}

/// Non-dominated, de-duplicated subset, lexicographically sorted.
fn filter<T>(mut items: Vec<(ObjectiveVector, T)>) -> Vec<(ObjectiveVector, T)> {
    items.sort_by(|a, b| lex_cmp(&a.0, &b.0));
    let mut kept: Vec<(ObjectiveVector, T)> = Vec::new();
    for (v, t) in items {
        if !kept
            .iter()
            .any(|(q, _)| weakly_dominates_within(q, &v, DEDUP_TOL))
        {
            kept.push((v, t));
        }
    }
    kept
}

/// Per-class search over integer flows on the arcs of one open set.
struct ClassEnum<'a> {
    inst: &'a ProblemInstance,
    m: usize,
    /// Arcs of class `m`, outbound arcs of a center before its inbound arcs.
    arcs: Vec<(ArcId, f64)>,
    /// For each position, `Some(j)` when it is the last inbound arc of `j`.
    closes: Vec<Option<usize>>,
    flows: Vec<f64>,
    supply_left: Vec<f64>,
    demand_left: Vec<f64>,
    vehicle_left: f64,
    /// Outbound minus inbound flow so far, per center.
    balance: Vec<f64>,
    out: Vec<(ObjectiveVector, Vec<f64>)>,
}

impl<'a> ClassEnum<'a> {
    fn new(inst: &'a ProblemInstance, m: usize, open: &[bool]) -> Self {
        let d = inst.dims;
        let mut arcs = Vec::new();
        let mut closes = Vec::new();
        for j in (0..d.centers).filter(|&j| open[j]) {
            let outs: Vec<_> = (0..d.affected)
                .filter(|&k| inst.admissible(m, j, k) && inst.cap_out[j][k] >= 1.0)
                .map(|k| (ArcId::Out { m, j, k }, inst.cap_out[j][k].floor()))
                .collect();
            let ins: Vec<_> = (0..d.supply)
                .filter(|&i| inst.cap_in[i][j] >= 1.0)
                .map(|i| (ArcId::In { m, i, j }, inst.cap_in[i][j].floor()))
                .collect();
            if outs.is_empty() || ins.is_empty() {
                continue;
            }
            closes.extend(std::iter::repeat(None).take(outs.len() + ins.len() - 1));
            closes.push(Some(j));
            arcs.extend(outs);
            arcs.extend(ins);
        }
        Self {
            inst,
            m,
            flows: vec![0.0; arcs.len()],
            arcs,
            closes,
            supply_left: inst.supply[m].clone(),
            demand_left: inst.demand[m].clone(),
            vehicle_left: inst.vehicle_capacity[m],
            balance: vec![0.0; d.centers],
            out: Vec::new(),
        }
    }

    fn run(mut self, budget: &mut Budget) -> Result<Vec<(ObjectiveVector, Vec<f64>)>> {
        self.visit(0, budget)?;
        Ok(filter(self.out))
    }

    fn visit(&mut self, pos: usize, budget: &mut Budget) -> Result<()> {
        budget.spend(1)?;
        if pos == self.arcs.len() {
            let v = self.objectives();
            self.out.push((v, self.flows.clone()));
            return Ok(());
        }
        let (id, upper) = self.arcs[pos];
        let limit = match id {
            ArcId::Out { k, .. } => upper
                .min(self.demand_left[k])
                .min(self.vehicle_left)
                .max(0.0)
                .floor(),
            ArcId::In { i, j, .. } => upper
                .min(self.supply_left[i])
                .min(self.balance[j])
                .max(0.0)
                .floor(),
        };
        let values: Vec<f64> = match (id, self.closes[pos]) {
            // The last inbound arc must close the center's balance exactly.
            (ArcId::In { j, .. }, Some(_)) => {
                let need = self.balance[j];
                if need <= limit + 1e-9 {
                    vec![need]
                } else {
                    vec![]
                }
            }
            _ => (0..=limit as u64).map(|x| x as f64).collect(),
        };
        for x in values {
            self.apply(id, x);
            self.flows[pos] = x;
            let r = self.visit(pos + 1, budget);
            self.apply(id, -x);
            self.flows[pos] = 0.0;
            r?;
        }
        Ok(())
    }

    fn apply(&mut self, id: ArcId, x: f64) {
        match id {
            ArcId::Out { j, k, .. } => {
                self.demand_left[k] -= x;
                self.vehicle_left -= x;
                self.balance[j] += x;
            }
            ArcId::In { i, j, .. } => {
                self.supply_left[i] -= x;
                self.balance[j] -= x;
            }
        }
    }

    /// Class contribution to each objective, excluding setup cost.
    fn objectives(&self) -> ObjectiveVector {
        let inst = self.inst;
        let mut v = ObjectiveVector::default();
        for (k, left) in self.demand_left.iter().enumerate() {
            v.f1 += inst.shortage_penalty[k] * left;
        }
        for (&(id, _), &x) in self.arcs.iter().zip(&self.flows) {
            if x <= 0.0 {
                continue;
            }
            match id {
                ArcId::In { i, j, .. } => {
                    v.f2 += inst.cost_in[i][j] * x;
                    v.f3 += inst.time_in[self.m][i][j];
                }
                ArcId::Out { j, k, .. } => {
                    v.f2 += inst.cost_out[j][k] * x;
                    v.f3 += inst.time_out[self.m][j][k];
                }
            }
        }
        v
    }
}

fn add(a: &ObjectiveVector, b: &ObjectiveVector) -> ObjectiveVector {
    ObjectiveVector::new(a.f1 + b.f1, a.f2 + b.f2, a.f3 + b.f3)
}

/// Pareto front over every open set and every integer flow tensor.
///
/// Fails with [`Error::TooLarge`] when enumeration needs more than
/// [`BRUTE_FORCE_LIMIT`] steps.
pub fn brute_force_front(inst: &ProblemInstance) -> Result<ParetoFront> {
    let report = model_core::model::validate_instance(inst);
    if !report.feasible {
        return Err(Error::Infeasible("instance failed validation".into()));
    }
    let d = inst.dims;
    let mut budget = Budget { used: 0 };
    let mut candidates = Vec::new();
    for open in OpenSets::new(d.centers, inst.max_open_centers) {
        let setup: f64 = (0..d.centers)
            .filter(|&j| open[j])
            .map(|j| inst.setup_cost[j])
            .sum();

        // Partial sums over classes: objective vector plus per-class choice.
        let mut partial: Vec<(ObjectiveVector, Vec<usize>)> =
            vec![(ObjectiveVector::new(0.0, setup, 0.0), Vec::new())];
        let mut class_fronts = Vec::with_capacity(d.vehicles);
        for m in 0..d.vehicles {
            let front = ClassEnum::new(inst, m, &open).run(&mut budget)?;
            budget.spend((partial.len() * front.len()) as u64)?;
            let mut next = Vec::with_capacity(partial.len() * front.len());
            for (pv, choice) in &partial {
                for (idx, (cv, _)) in front.iter().enumerate() {
                    let mut c = choice.clone();
                    c.push(idx);
                    next.push((add(pv, cv), c));
                }
            }
            partial = filter(next);
            class_fronts.push(front);
        }

        for (_, choice) in partial {
            let mut sol = inst.zero_solution();
            sol.open = open.clone();
            for (m, &idx) in choice.iter().enumerate() {
                let enumerated = ClassEnum::new(inst, m, &open);
                for (&(id, _), &x) in enumerated.arcs.iter().zip(&class_fronts[m][idx].1) {
                    match id {
                        ArcId::In { i, j, .. } => sol.flow_in[m][i][j] = x,
                        ArcId::Out { j, k, .. } => sol.flow_out[m][j][k] = x,
                    }
                }
            }
            // Recompute from the model so the oracle shares no arithmetic
            // shortcuts with the enumeration.
            let objectives = evaluate_objectives(inst, &sol)?;
            candidates.push(FrontPoint {
                objectives,
                solution: sol,
            });
        }
    }
    Ok(ParetoFront::from_candidates(candidates))
}
