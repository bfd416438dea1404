//! Arc network of one open-center configuration and the flow LP built on it.

use serde::{Deserialize, Serialize};

use model_core::lp::{LinearProgram, LpOutcome, RowKind};
use model_core::model::{Objective, ProblemInstance, Solution, ACTIVE_FLOW_TOL};

use super::FlowDomain;

/// Identifies one arc of the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ArcId {
    /// Vehicle class `m` from supply point `i` to center `j`.
    In { m: usize, i: usize, j: usize },
    /// Vehicle class `m` from center `j` to affected area `k`.
    Out { m: usize, j: usize, k: usize },
}

#[derive(Debug, Clone)]
pub(crate) struct Arc {
    pub id: ArcId,
    /// Tightest implied flow bound, floored in integral mode.
    pub upper: f64,
    pub cost: f64,
    pub time: f64,
    /// `π_k` on outbound arcs, zero inbound.
    pub penalty: f64,
}

/// Usable arcs of an open set. Arcs whose implied bound is zero are dropped.
#[derive(Debug, Clone)]
pub(crate) struct Network {
    pub open: Vec<bool>,
    pub arcs: Vec<Arc>,
    pub setup: f64,
    pub shortage_base: f64,
}

fn domain_bound(x: f64, domain: FlowDomain) -> f64 {
    match domain {
        FlowDomain::Continuous => x,
        FlowDomain::Integral => (x + 1e-9).floor(),
    }
}

impl Network {
    pub fn build(inst: &ProblemInstance, open: &[bool], domain: FlowDomain) -> Self {
        Self::build_filtered(inst, open, domain, |_| true)
    }

    pub fn build_filtered(
        inst: &ProblemInstance,
        open: &[bool],
        domain: FlowDomain,
        keep: impl Fn(&ArcId) -> bool,
    ) -> Self {
        let d = inst.dims;
        let mut arcs = Vec::new();
        for m in 0..d.vehicles {
            let vcap = inst.vehicle_capacity[m];
            for j in (0..d.centers).filter(|&j| open[j]) {
                // What center j can pass on, and what it can receive, for class m.
                let out_room: f64 = (0..d.affected)
                    .filter(|&k| inst.admissible(m, j, k))
                    .map(|k| inst.cap_out[j][k].min(inst.demand[m][k]))
                    .sum();
                let in_room: f64 = (0..d.supply)
                    .map(|i| inst.cap_in[i][j].min(inst.supply[m][i]))
                    .sum();
                for i in 0..d.supply {
                    let id = ArcId::In { m, i, j };
                    let upper = domain_bound(
                        inst.cap_in[i][j]
                            .min(inst.supply[m][i])
                            .min(vcap)
                            .min(out_room),
                        domain,
                    );
                    if upper > 0.0 && keep(&id) {
                        arcs.push(Arc {
                            id,
                            upper,
                            cost: inst.cost_in[i][j],
                            time: inst.time_in[m][i][j],
                            penalty: 0.0,
                        });
                    }
                }
                for k in (0..d.affected).filter(|&k| inst.admissible(m, j, k)) {
                    let id = ArcId::Out { m, j, k };
                    let upper = domain_bound(
                        inst.cap_out[j][k]
                            .min(inst.demand[m][k])
                            .min(vcap)
                            .min(in_room),
                        domain,
                    );
                    if upper > 0.0 && keep(&id) {
                        arcs.push(Arc {
                            id,
                            upper,
                            cost: inst.cost_out[j][k],
                            time: inst.time_out[m][j][k],
                            penalty: inst.shortage_penalty[k],
                        });
                    }
                }
            }
        }
        let setup = open
            .iter()
            .zip(&inst.setup_cost)
            .filter(|(o, _)| **o)
            .map(|(_, f)| f)
            .sum();
        Self {
            open: open.to_vec(),
            arcs,
            setup,
            shortage_base: inst.total_shortage_cost(),
        }
    }

    /// True when every open center has at least one inbound and one outbound
    /// arc for some vehicle class. Opening a center that cannot carry flow
    /// only adds setup cost.
    pub fn all_open_centers_usable(&self) -> bool {
        self.open.iter().enumerate().filter(|(_, o)| **o).all(|(j, _)| {
            let has_in = self
                .arcs
                .iter()
                .any(|a| matches!(a.id, ArcId::In { j: aj, .. } if aj == j));
            let has_out = self
                .arcs
                .iter()
                .any(|a| matches!(a.id, ArcId::Out { j: aj, .. } if aj == j));
            has_in && has_out
        })
    }

    pub fn to_solution(&self, inst: &ProblemInstance, flows: &[f64]) -> Solution {
        let mut sol = inst.zero_solution();
        sol.open = self.open.clone();
        for (arc, &x) in self.arcs.iter().zip(flows) {
            match arc.id {
                ArcId::In { m, i, j } => sol.flow_in[m][i][j] = x,
                ArcId::Out { m, j, k } => sol.flow_out[m][j][k] = x,
            }
        }
        sol
    }
}

/// Activation state of an arc inside the search tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Activation {
    Free,
    On,
    Off,
}

/// Per-arc state of a search node.
#[derive(Debug, Clone)]
pub(crate) struct NodeState {
    pub activation: Vec<Activation>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl NodeState {
    pub fn root(net: &Network) -> Self {
        Self {
            activation: vec![Activation::Free; net.arcs.len()],
            lower: vec![0.0; net.arcs.len()],
            upper: net.arcs.iter().map(|a| a.upper).collect(),
        }
    }

    /// Coefficient of arc `a`'s flow in the relaxed linear form of `obj`.
    pub fn coefficient(&self, net: &Network, a: usize, obj: Objective) -> f64 {
        let arc = &net.arcs[a];
        match obj {
            Objective::Shortage => -arc.penalty,
            Objective::Cost => arc.cost,
            // A free arc's indicator is relaxed to flow / upper.
            Objective::Time => match self.activation[a] {
                Activation::Free if self.upper[a] > 0.0 => arc.time / self.upper[a],
                _ => 0.0,
            },
        }
    }

    /// Flow-independent part of `obj` at this node.
    pub fn constant(&self, net: &Network, obj: Objective) -> f64 {
        match obj {
            Objective::Shortage => net.shortage_base,
            Objective::Cost => net.setup,
            Objective::Time => net
                .arcs
                .iter()
                .zip(&self.activation)
                .filter(|(_, s)| **s == Activation::On)
                .map(|(a, _)| a.time)
                .sum(),
        }
    }
}

/// Relaxation of one node.
pub(crate) struct NodeLp {
    pub lp: LinearProgram,
    /// LP column of each arc, `None` when the arc is forced to zero.
    pub column: Vec<Option<usize>>,
    pub constant: f64,
}

/// Weights of the flow-linear objective parts used by [`super::min_cost_transport`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowObjectiveWeights {
    /// Weight on the shortage cost.
    pub shortage: f64,
    /// Weight on the transport cost.
    pub cost: f64,
}

impl Default for FlowObjectiveWeights {
    fn default() -> Self {
        Self {
            shortage: 1.0,
            cost: 1.0,
        }
    }
}

/// Builds the node LP minimizing `cost(a) · flow_a` with objective upper
/// bounds `bounds[o]`. Returns `None` when a bound is already violated by the
/// node's constant terms.
pub(crate) fn build_node_lp(
    inst: &ProblemInstance,
    net: &Network,
    node: &NodeState,
    cost: impl Fn(usize) -> f64,
    constant: f64,
    bounds: &[Option<f64>; 3],
) -> Option<NodeLp> {
    let d = inst.dims;
    let mut lp = LinearProgram::new();
    let mut column = vec![None; net.arcs.len()];
    for (a, col) in column.iter_mut().enumerate() {
        if node.activation[a] == Activation::Off || node.upper[a] <= 0.0 {
            continue;
        }
        *col = Some(lp.add_var(cost(a), node.lower[a], node.upper[a]));
    }

    let mut conservation = vec![Vec::new(); d.vehicles * d.centers];
    let mut supply = vec![Vec::new(); d.vehicles * d.supply];
    let mut demand = vec![Vec::new(); d.vehicles * d.affected];
    let mut vehicle = vec![Vec::new(); d.vehicles];
    for (a, arc) in net.arcs.iter().enumerate() {
        let Some(c) = column[a] else { continue };
        match arc.id {
            ArcId::In { m, i, j } => {
                conservation[m * d.centers + j].push((c, 1.0));
                supply[m * d.supply + i].push((c, 1.0));
            }
            ArcId::Out { m, j, k } => {
                conservation[m * d.centers + j].push((c, -1.0));
                demand[m * d.affected + k].push((c, 1.0));
                vehicle[m].push((c, 1.0));
            }
        }
    }
    for coeffs in conservation.into_iter().filter(|c| !c.is_empty()) {
        lp.add_row(coeffs, RowKind::Eq, 0.0);
    }
    for (idx, coeffs) in supply.into_iter().enumerate() {
        if coeffs.len() > 1 {
            let (m, i) = (idx / d.supply, idx % d.supply);
            lp.add_row(coeffs, RowKind::Le, inst.supply[m][i]);
        }
    }
    for (idx, coeffs) in demand.into_iter().enumerate() {
        if coeffs.len() > 1 {
            let (m, k) = (idx / d.affected, idx % d.affected);
            lp.add_row(coeffs, RowKind::Le, inst.demand[m][k]);
        }
    }
    for (m, coeffs) in vehicle.into_iter().enumerate() {
        if coeffs.len() > 1 {
            lp.add_row(coeffs, RowKind::Le, inst.vehicle_capacity[m]);
        }
    }
    for obj in Objective::ALL {
        let Some(bound) = bounds[obj.index()] else {
            continue;
        };
        let rhs = bound - node.constant(net, obj);
        let coeffs: Vec<(usize, f64)> = column
            .iter()
            .enumerate()
            .filter_map(|(a, c)| c.map(|c| (c, node.coefficient(net, a, obj))))
            .filter(|(_, v)| *v != 0.0)
            .collect();
        let slack = 1e-9 * (1.0 + bound.abs());
        if coeffs.iter().all(|(_, v)| *v > 0.0) {
            // Flows are non-negative, so the constant alone must fit.
            if rhs < -slack {
                return None;
            }
            if !coeffs.is_empty() {
                lp.add_row(coeffs, RowKind::Le, rhs.max(0.0));
            }
        } else {
            lp.add_row(coeffs, RowKind::Le, rhs);
        }
    }
    Some(NodeLp {
        lp,
        column,
        constant,
    })
}

/// Solves a node LP and returns per-arc flows plus the objective value.
pub(crate) fn solve_node_lp(node_lp: &NodeLp) -> Option<(Vec<f64>, f64)> {
    match node_lp.lp.solve() {
        LpOutcome::Optimal { x, objective } => {
            let flows = node_lp
                .column
                .iter()
                .map(|c| c.map_or(0.0, |c| clean(x[c])))
                .collect();
            Some((flows, objective + node_lp.constant))
        }
        _ => None,
    }
}

fn clean(x: f64) -> f64 {
    if x <= ACTIVE_FLOW_TOL {
        0.0
    } else {
        x
    }
}
