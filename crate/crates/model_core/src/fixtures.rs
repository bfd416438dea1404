//! Small hand-checkable instances.

use crate::model::{Dims, ProblemInstance};

/// The 1×1×1×1 instance used throughout the test suite: `d = 5`, `π = 2`,
/// `c_in = 1`, `c_out = 3`, `F = 10`, `t_in = 4`, `t_out = 6`.
pub fn unit_instance() -> ProblemInstance {
    let mut inst = ProblemInstance::zeros(Dims::new(1, 1, 1, 1));
    inst.setup_cost = vec![10.0];
    inst.shortage_penalty = vec![2.0];
    inst.demand = vec![vec![5.0]];
    inst.supply = vec![vec![5.0]];
    inst.cost_in = vec![vec![1.0]];
    inst.cost_out = vec![vec![3.0]];
    inst.cap_in = vec![vec![5.0]];
    inst.cap_out = vec![vec![5.0]];
    inst.vehicle_capacity = vec![5.0];
    inst.time_in = vec![vec![vec![4.0]]];
    inst.time_out = vec![vec![vec![6.0]]];
    inst.dist_out = vec![vec![1.0]];
    inst.coverage_radius = vec![10.0];
    inst.speed = vec![1.0];
    inst.max_open_centers = 1;
    inst
}
