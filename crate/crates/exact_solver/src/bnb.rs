//! Exact single-objective search: open-set enumeration outside, depth-first
//! branch and bound on arc activations (and on flow integrality in integral
//! mode) inside, with the flow LP as the bound.

use std::time::Instant;

use model_core::error::{Error, Result};
use model_core::model::{evaluate_objectives, Objective, ObjectiveVector, ProblemInstance, Solution};

use super::network::{build_node_lp, solve_node_lp, Activation, Network, NodeState};
use super::{ExactConfig, FlowDomain};

const INT_TOL: f64 = 1e-6;
const ACT_TOL: f64 = 1e-6;

/// Upper bounds on objectives; `None` leaves an objective unconstrained.
pub type ObjectiveBounds = [Option<f64>; 3];

fn bound_tol(v: f64) -> f64 {
    1e-7 * (1.0 + v.abs())
}

fn within(v: &ObjectiveVector, bounds: &ObjectiveBounds) -> bool {
    Objective::ALL.iter().all(|o| match bounds[o.index()] {
        Some(b) => v.get(*o) <= b + bound_tol(b),
        None => true,
    })
}

pub(crate) struct Search<'a> {
    pub inst: &'a ProblemInstance,
    pub cfg: &'a ExactConfig,
    pub deadline: Option<Instant>,
    pub started: Instant,
}

struct Incumbent {
    value: f64,
    solution: Solution,
    objectives: ObjectiveVector,
}

impl<'a> Search<'a> {
    pub fn new(inst: &'a ProblemInstance, cfg: &'a ExactConfig) -> Self {
        let started = Instant::now();
        Self {
            inst,
            cfg,
            deadline: cfg.time_limit.map(|t| started + t),
            started,
        }
    }

    fn check_deadline(&self) -> Result<()> {
        if let Some(d) = self.deadline {
            if Instant::now() >= d {
                return Err(Error::TimedOut {
                    seconds: self.started.elapsed().as_secs_f64(),
                });
            }
        }
        Ok(())
    }

    /// Lexicographic minimization of `order` subject to `bounds`.
    /// Returns `None` when no solution satisfies the bounds.
    pub fn lexicographic(
        &self,
        order: &[Objective],
        bounds: ObjectiveBounds,
    ) -> Result<Option<(Solution, ObjectiveVector)>> {
        let mut bounds = bounds;
        let mut best = None;
        for &obj in order {
            match self.minimize(obj, &bounds)? {
                None => return Ok(None),
                Some(inc) => {
                    let v = inc.value;
                    let slot = &mut bounds[obj.index()];
                    let tightened = v + bound_tol(v);
                    *slot = Some(slot.map_or(tightened, |b| b.min(tightened)));
                    best = Some((inc.solution, inc.objectives));
                }
            }
        }
        Ok(best)
    }

    fn minimize(
        &self,
        obj: Objective,
        bounds: &ObjectiveBounds,
    ) -> Result<Option<Incumbent>> {
        let mut incumbent: Option<Incumbent> = None;
        let mut nodes: u64 = 0;
        let cost_bound = bounds[Objective::Cost.index()];
        for open in OpenSets::new(self.inst.dims.centers, self.inst.max_open_centers) {
            self.check_deadline()?;
            if let Some(b) = cost_bound {
                let setup: f64 = open
                    .iter()
                    .zip(&self.inst.setup_cost)
                    .filter(|(o, _)| **o)
                    .map(|(_, f)| f)
                    .sum();
                if setup > b + bound_tol(b) {
                    continue;
                }
            }
            let net = Network::build(self.inst, &open, self.cfg.flow_domain);
            if !net.all_open_centers_usable() {
                continue;
            }
            self.branch_and_bound(&net, obj, bounds, &mut incumbent, &mut nodes)?;
        }
        Ok(incumbent)
    }

    fn branch_and_bound(
        &self,
        net: &Network,
        obj: Objective,
        bounds: &ObjectiveBounds,
        incumbent: &mut Option<Incumbent>,
        nodes: &mut u64,
    ) -> Result<()> {
        let mut stack = vec![NodeState::root(net)];
        while let Some(node) = stack.pop() {
            *nodes += 1;
            if *nodes > self.cfg.node_limit {
                return Err(Error::BudgetExceeded { nodes: *nodes - 1 });
            }
            if *nodes % 64 == 0 {
                self.check_deadline()?;
            }
            let constant = node.constant(net, obj);
            let Some(node_lp) = build_node_lp(
                self.inst,
                net,
                &node,
                |a| node.coefficient(net, a, obj),
                constant,
                bounds,
            ) else {
                continue;
            };
            let Some((flows, value)) = solve_node_lp(&node_lp) else {
                continue;
            };
            if let Some(inc) = incumbent.as_ref() {
                if value >= inc.value - 1e-9 * (1.0 + inc.value.abs()) {
                    continue;
                }
            }

            // Branch on the fractional activation with the largest arc time.
            let fractional_activation = net
                .arcs
                .iter()
                .enumerate()
                .filter(|(a, _)| {
                    node.activation[*a] == Activation::Free
                        && flows[*a] > ACT_TOL
                        && flows[*a] < node.upper[*a] - ACT_TOL * (1.0 + node.upper[*a])
                })
                .max_by(|(a1, x), (a2, y)| x.time.total_cmp(&y.time).then(a2.cmp(a1)))
                .map(|(a, _)| a);
            if let Some(a) = fractional_activation {
                let mut off = node.clone();
                off.activation[a] = Activation::Off;
                off.upper[a] = 0.0;
                let mut on = node;
                on.activation[a] = Activation::On;
                let ratio = flows[a] / on.upper[a];
                if ratio >= 0.5 {
                    stack.push(off);
                    stack.push(on);
                } else {
                    stack.push(on);
                    stack.push(off);
                }
                continue;
            }

            if self.cfg.flow_domain == FlowDomain::Integral {
                let fractional_flow = net
                    .arcs
                    .iter()
                    .enumerate()
                    .filter(|(a, _)| (flows[*a] - flows[*a].round()).abs() > INT_TOL)
                    .max_by(|(a1, x), (a2, y)| x.time.total_cmp(&y.time).then(a2.cmp(a1)))
                    .map(|(a, _)| a);
                if let Some(a) = fractional_flow {
                    let x = flows[a];
                    let mut down = node.clone();
                    down.upper[a] = x.floor();
                    if down.upper[a] <= 0.0 {
                        down.activation[a] = Activation::Off;
                    }
                    let mut up = node;
                    up.lower[a] = x.ceil();
                    if up.activation[a] == Activation::Free {
                        up.activation[a] = Activation::On;
                    }
                    if x - x.floor() >= 0.5 {
                        stack.push(down);
                        stack.push(up);
                    } else {
                        stack.push(up);
                        stack.push(down);
                    }
                    continue;
                }
            }

            let flows: Vec<f64> = match self.cfg.flow_domain {
                FlowDomain::Integral => flows.iter().map(|x| x.round()).collect(),
                FlowDomain::Continuous => flows,
            };
            let solution = net.to_solution(self.inst, &flows);
            let objectives = evaluate_objectives(self.inst, &solution)?;
            if !within(&objectives, bounds) {
                continue;
            }
            let v = objectives.get(obj);
            let better = incumbent
                .as_ref()
                .map_or(true, |inc| v < inc.value - 1e-9 * (1.0 + inc.value.abs()));
            if better {
                *incumbent = Some(Incumbent {
                    value: v,
                    solution,
                    objectives,
                });
            }
        }
        Ok(())
    }
}

/// Subsets of `0..n` with at most `max_size` members, by size then
/// lexicographically, as membership vectors.
pub(crate) struct OpenSets {
    n: usize,
    max_size: usize,
    combo: Option<Vec<usize>>,
}

impl OpenSets {
    pub fn new(n: usize, max_size: usize) -> Self {
        Self {
            n,
            max_size: max_size.min(n),
            combo: Some(Vec::new()),
        }
    }

    fn advance(&mut self) {
        let Some(c) = self.combo.as_mut() else { return };
        let size = c.len();
        // Rightmost position that can still move right.
        let mut pos = size;
        while pos > 0 {
            pos -= 1;
            if c[pos] < self.n - size + pos {
                c[pos] += 1;
                for q in pos + 1..size {
                    c[q] = c[q - 1] + 1;
                }
                return;
            }
        }
        if size < self.max_size {
            *c = (0..size + 1).collect();
        } else {
            self.combo = None;
        }
    }
}

impl Iterator for OpenSets {
    type Item = Vec<bool>;

    fn next(&mut self) -> Option<Vec<bool>> {
        let c = self.combo.as_ref()?;
        let mut open = vec![false; self.n];
        for &j in c {
            open[j] = true;
        }
        self.advance();
        Some(open)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn open_sets_cover_every_subset_within_budget() {
        let all: Vec<Vec<bool>> = OpenSets::new(4, 2).collect();
        assert_eq!(all.len(), 1 + 4 + 6);
        assert!(all[0].iter().all(|o| !o));
        let mut seen = std::collections::HashSet::new();
        for s in &all {
            assert!(s.iter().filter(|o| **o).count() <= 2);
            assert!(seen.insert(s.clone()));
        }
        assert_eq!(OpenSets::new(3, 5).count(), 8);
        assert_eq!(OpenSets::new(1, 1).count(), 2);
    }
}
