use rand::Rng;
use serde::{Deserialize, Serialize};

use model_core::error::{Error, Result};
use model_core::model::{ProblemInstance, Solution};

use super::flow::FlowGraph;

/// Weight of arc time in the inbound routing cost, small enough to only
/// separate equal-cost routes.
const TIME_TIE_BREAK: f64 = 1e-6;

/// Open-center proposal plus one priority key per outbound arc.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chromosome {
    pub open_bits: Vec<bool>,
    /// `[m][j][k]`, each in `[0, 1]`.
    pub priority_keys: Vec<Vec<Vec<f64>>>,
}

impl Chromosome {
    /// Bits open with probability one half, keys uniform.
    pub fn random(inst: &ProblemInstance, rng: &mut impl Rng) -> Self {
        let d = inst.dims;
        let open_bits = (0..d.centers).map(|_| rng.gen_bool(0.5)).collect();
        let priority_keys = (0..d.vehicles)
            .map(|_| {
                (0..d.centers)
                    .map(|_| (0..d.affected).map(|_| rng.gen::<f64>()).collect())
                    .collect()
            })
            .collect();
        Self {
            open_bits,
            priority_keys,
        }
    }

    fn check_shape(&self, inst: &ProblemInstance) -> Result<()> {
        let d = inst.dims;
        let ok = self.open_bits.len() == d.centers
            && self.priority_keys.len() == d.vehicles
            && self.priority_keys.iter().all(|pm| {
                pm.len() == d.centers && pm.iter().all(|pj| pj.len() == d.affected)
            });
        if ok {
            Ok(())
        } else {
            Err(Error::Shape("chromosome does not match the instance".into()))
        }
    }
}

/// Open set after budget repair: the lowest-index set bits, at most `P_N`.
pub fn repaired_open_set(bits: &[bool], max_open: usize) -> Vec<bool> {
    let mut left = max_open;
    bits.iter()
        .map(|&b| {
            if b && left > 0 {
                left -= 1;
                true
            } else {
                false
            }
        })
        .collect()
}

/// Builds a feasible solution from a chromosome.
///
/// For each vehicle class, outbound arcs of open centers are visited in
/// decreasing key order (ties by `(j, k)`), and each is filled to the
/// smallest of remaining demand, arc capacity, remaining vehicle capacity
/// and what the supply side can still deliver to the center. Inbound flows
/// are kept at minimum `c_ij` cost (ties to the faster arc) throughout by successive shortest paths.
pub fn decode(chrom: &Chromosome, inst: &ProblemInstance) -> Result<Solution> {
    chrom.check_shape(inst)?;
    let d = inst.dims;
    let mut sol = inst.zero_solution();
    sol.open = repaired_open_set(&chrom.open_bits, inst.max_open_centers);

    for m in 0..d.vehicles {
        // Nodes: source, supplies, centers, sink.
        let source = 0;
        let supply_node = |i: usize| 1 + i;
        let center_node = |j: usize| 1 + d.supply + j;
        let sink = 1 + d.supply + d.centers;
        let mut g = FlowGraph::new(sink + 1);
        for i in 0..d.supply {
            g.add_edge(source, supply_node(i), inst.supply[m][i], 0.0);
        }
        let mut in_edges = Vec::new();
        for i in 0..d.supply {
            for j in (0..d.centers).filter(|&j| sol.open[j]) {
                if inst.cap_in[i][j] > 0.0 {
                    let e = g.add_edge(
                        supply_node(i),
                        center_node(j),
                        inst.cap_in[i][j],
                        inst.cost_in[i][j] + TIME_TIE_BREAK * inst.time_in[m][i][j],
                    );
                    in_edges.push((i, j, e));
                }
            }
        }
        let sink_edges: Vec<Option<usize>> = (0..d.centers)
            .map(|j| sol.open[j].then(|| g.add_edge(center_node(j), sink, 0.0, 0.0)))
            .collect();

        let mut arcs: Vec<(usize, usize)> = (0..d.centers)
            .filter(|&j| sol.open[j])
            .flat_map(|j| (0..d.affected).map(move |k| (j, k)))
            .filter(|&(j, k)| inst.admissible(m, j, k) && inst.cap_out[j][k] > 0.0)
            .collect();
        let keys = &chrom.priority_keys[m];
        // Stable sort keeps index order among equal keys.
        arcs.sort_by(|a, b| keys[b.0][b.1].total_cmp(&keys[a.0][a.1]));

        let mut demand_left = inst.demand[m].clone();
        let mut vehicle_left = inst.vehicle_capacity[m];
        for (j, k) in arcs {
            let want = demand_left[k].min(inst.cap_out[j][k]).min(vehicle_left);
            if want <= 1e-9 {
                continue;
            }
            let e = sink_edges[j].expect("open center has a sink edge");
            let base = g.cap(e);
            g.set_cap(e, base + want);
            let got = g.augment(source, sink, want);
            g.set_cap(e, base + got);
            if got <= 1e-9 {
                continue;
            }
            sol.flow_out[m][j][k] = got;
            demand_left[k] -= got;
            vehicle_left -= got;
        }
        for (i, j, e) in in_edges {
            let q = g.flow(e);
            if q > 1e-9 {
                sol.flow_in[m][i][j] = q;
            }
        }
    }
    Ok(sol)
}
