use approx::assert_abs_diff_eq;

use super::*;
use model_core::fixtures::unit_instance;
use model_core::model::{check_feasibility, evaluate_objectives, Dims, FEASIBILITY_TOL};

fn cfg() -> ExactConfig {
    ExactConfig::default()
}

fn vectors(front: &ParetoFront) -> Vec<[f64; 3]> {
    front.objectives().iter().map(|v| v.as_array()).collect()
}

fn chain(supply: f64, demand: f64, cap: f64) -> ProblemInstance {
    let mut inst = unit_instance();
    inst.supply = vec![vec![supply]];
    inst.demand = vec![vec![demand]];
    inst.cap_in = vec![vec![cap]];
    inst.cap_out = vec![vec![cap]];
    inst.vehicle_capacity = vec![cap];
    inst.shortage_penalty = vec![10.0];
    inst
}

fn two_by_two() -> ProblemInstance {
    let mut inst = ProblemInstance::zeros(Dims::new(2, 2, 2, 1));
    inst.setup_cost = vec![4.0, 3.0];
    inst.shortage_penalty = vec![6.0, 5.0];
    inst.demand = vec![vec![2.0, 3.0]];
    inst.supply = vec![vec![3.0, 2.0]];
    inst.cost_in = vec![vec![1.0, 2.0], vec![2.0, 1.0]];
    inst.cost_out = vec![vec![1.0, 3.0], vec![2.0, 1.0]];
    inst.cap_in = vec![vec![2.0, 2.0], vec![2.0, 2.0]];
    inst.cap_out = vec![vec![2.0, 2.0], vec![2.0, 3.0]];
    inst.vehicle_capacity = vec![4.0];
    inst.time_in = vec![vec![vec![2.0, 3.0], vec![1.0, 2.0]]];
    inst.time_out = vec![vec![vec![1.0, 4.0], vec![3.0, 2.0]]];
    inst.dist_out = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
    inst.coverage_radius = vec![5.0];
    inst.max_open_centers = 2;
    inst
}

#[test]
fn unit_payoff_rows() {
    let p = payoff_table(&unit_instance(), &cfg()).unwrap();
    assert_eq!(p.rows[0], ObjectiveVector::new(0.0, 30.0, 10.0));
    assert_eq!(p.rows[1], ObjectiveVector::new(10.0, 0.0, 0.0));
    assert_eq!(p.rows[2], ObjectiveVector::new(10.0, 0.0, 0.0));
}

#[test]
fn zero_demand_payoff_and_front_are_trivial() {
    let mut inst = unit_instance();
    inst.demand = vec![vec![0.0]];
    let p = payoff_table(&inst, &cfg()).unwrap();
    assert!(p.rows.iter().all(|r| *r == ObjectiveVector::default()));
    let front = epsilon_constraint_front(&inst, 4, &cfg()).unwrap();
    assert_eq!(vectors(&front), vec![[0.0, 0.0, 0.0]]);
    assert_eq!(vectors(&brute_force_front(&inst).unwrap()), vec![[0.0; 3]]);
}

#[test]
fn unit_brute_force_front_trades_shortage_for_cost() {
    let front = brute_force_front(&unit_instance()).unwrap();
    let expected: Vec<[f64; 3]> = (0..=5)
        .rev()
        .map(|x| {
            let x = x as f64;
            if x == 0.0 {
                [10.0, 0.0, 0.0]
            } else {
                [2.0 * (5.0 - x), 10.0 + 4.0 * x, 10.0]
            }
        })
        .collect();
    assert_eq!(vectors(&front), expected);
}

#[test]
fn capacity_zero_front_is_a_single_point() {
    let mut inst = unit_instance();
    inst.cap_in = vec![vec![0.0]];
    let front = brute_force_front(&inst).unwrap();
    assert_eq!(vectors(&front), vec![[10.0, 0.0, 0.0]]);
    let front = epsilon_constraint_front(&inst, 3, &cfg()).unwrap();
    assert_eq!(vectors(&front), vec![[10.0, 0.0, 0.0]]);
}

#[test]
fn grid_spacing() {
    let payoff = |col2: [f64; 3], col3: [f64; 3]| PayoffTable {
        rows: [0, 1, 2].map(|r| ObjectiveVector::new(0.0, col2[r], col3[r])),
    };
    let g = epsilon_grid(&payoff([5.0, 5.0, 5.0], [1.0, 1.0, 0.0]), 7).unwrap();
    assert_eq!(g.eps2, vec![5.0]);

    let g = epsilon_grid(&payoff([3.0, 0.0, 11.0], [0.0, 0.0, 0.0]), 10).unwrap();
    for (k, e) in g.eps2.iter().enumerate() {
        assert_abs_diff_eq!(*e, (k + 1) as f64, epsilon = 1e-12);
    }
    assert_eq!(g.eps3, vec![0.0]);

    let lo = 854.407;
    let hi = lo + 11.0 * 7.5103;
    let g = epsilon_grid(&payoff([0.0; 3], [hi, 900.0, lo]), 10).unwrap();
    assert_abs_diff_eq!(g.eps3[0], 861.9173, epsilon = 1e-4);
    assert_abs_diff_eq!(g.eps3[1], 869.4276, epsilon = 1e-4);
    assert_eq!(g.eps3.len(), 10);

    assert!(epsilon_grid(&payoff([0.0; 3], [0.0; 3]), 0).is_err());
}

#[test]
fn zero_time_budget_forces_zero_flow() {
    let inst = two_by_two();
    let sol = solve_single_objective(&inst, Objective::Shortage, f64::INFINITY, 0.0, &cfg())
        .unwrap();
    let v = evaluate_objectives(&inst, &sol).unwrap();
    assert_eq!(v.f1, inst.total_shortage_cost());
    assert_eq!(v.f3, 0.0);
}

#[test]
fn unbounded_single_objective_matches_payoff_row() {
    let inst = two_by_two();
    let p = payoff_table(&inst, &cfg()).unwrap();
    for obj in Objective::ALL {
        let sol = solve_single_objective(&inst, obj, f64::INFINITY, f64::INFINITY, &cfg()).unwrap();
        let v = evaluate_objectives(&inst, &sol).unwrap();
        assert!(v.approx_eq(&p.rows[obj.index()], 1e-9), "{obj:?}: {v:?}");
    }
}

#[test]
fn payoff_diagonal_is_column_minimum() {
    let p = payoff_table(&two_by_two(), &cfg()).unwrap();
    for obj in Objective::ALL {
        for row in &p.rows {
            assert!(p.ideal(obj) <= row.get(obj) + 1e-9);
        }
    }
}

#[test]
fn grid_cells_match_the_oracle() {
    let inst = two_by_two();
    let oracle = brute_force_front(&inst).unwrap();
    let p = payoff_table(&inst, &cfg()).unwrap();
    let grid = epsilon_grid(&p, 4).unwrap();
    for &e2 in &grid.eps2 {
        for &e3 in &grid.eps3 {
            let best = oracle
                .objectives()
                .into_iter()
                .filter(|v| v.f2 <= e2 + 1e-9 && v.f3 <= e3 + 1e-9)
                .min_by(|a, b| model_core::pareto::lex_cmp(a, b));
            let got = solve_single_objective(&inst, Objective::Shortage, e2, e3, &cfg());
            match (best, got) {
                (None, Err(Error::Infeasible(_))) => {}
                (Some(b), Ok(sol)) => {
                    let v = evaluate_objectives(&inst, &sol).unwrap();
                    assert!(v.approx_eq(&b, 1e-9), "cell ({e2}, {e3}): {v:?} vs {b:?}");
                }
                (b, g) => panic!("cell ({e2}, {e3}): oracle {b:?}, solver {g:?}"),
            }
        }
    }
}

#[test]
fn refined_front_equals_the_oracle() {
    for inst in [unit_instance(), two_by_two()] {
        let oracle = brute_force_front(&inst).unwrap();
        let mut eps2: Vec<f64> = oracle.objectives().iter().map(|v| v.f2).collect();
        let mut eps3: Vec<f64> = oracle.objectives().iter().map(|v| v.f3).collect();
        eps2.sort_by(f64::total_cmp);
        eps3.sort_by(f64::total_cmp);
        let grid = EpsilonGrid { eps2, eps3 };
        let front = epsilon_constraint_front_on_grid(&inst, &grid, &cfg()).unwrap();
        assert_eq!(front.len(), oracle.len());
        for (a, b) in front.objectives().iter().zip(oracle.objectives()) {
            assert!(a.approx_eq(&b, 1e-9), "{a:?} vs {b:?}");
        }
    }
}

#[test]
fn front_points_are_feasible_and_deterministic() {
    let inst = two_by_two();
    let a = epsilon_constraint_front(&inst, 5, &cfg()).unwrap();
    let b = epsilon_constraint_front(&inst, 5, &cfg()).unwrap();
    assert_eq!(a, b);
    for p in &a.points {
        assert!(check_feasibility(&inst, &p.solution, FEASIBILITY_TOL).unwrap().feasible);
        assert_eq!(evaluate_objectives(&inst, &p.solution).unwrap(), p.objectives);
    }
}

#[test]
fn shortage_is_non_increasing_in_time_budget() {
    let inst = two_by_two();
    let p = payoff_table(&inst, &cfg()).unwrap();
    let grid = epsilon_grid(&p, 6).unwrap();
    let e2 = grid.eps2[grid.eps2.len() / 2];
    let mut last = f64::INFINITY;
    for &e3 in &grid.eps3 {
        if let Ok(sol) = solve_single_objective(&inst, Objective::Shortage, e2, e3, &cfg()) {
            let f1 = evaluate_objectives(&inst, &sol).unwrap().f1;
            assert!(f1 <= last + 1e-9);
            last = f1;
        }
    }
}

#[test]
fn node_limit_is_reported() {
    let inst = two_by_two();
    let tight = ExactConfig {
        node_limit: 1,
        ..cfg()
    };
    assert!(matches!(
        payoff_table(&inst, &tight),
        Err(Error::BudgetExceeded { .. })
    ));
}

#[test]
fn transport_without_arcs_is_zero_flow() {
    let inst = unit_instance();
    let sol = min_cost_transport(&inst, &[true], &[], FlowObjectiveWeights::default()).unwrap();
    assert_eq!(sol.flow_in[0][0][0], 0.0);
    assert_eq!(sol.flow_out[0][0][0], 0.0);
}

#[test]
fn transport_chain_is_limited_by_demand() {
    let inst = chain(7.0, 5.0, 10.0);
    let arcs = [
        ArcId::In { m: 0, i: 0, j: 0 },
        ArcId::Out { m: 0, j: 0, k: 0 },
    ];
    let sol = min_cost_transport(&inst, &[true], &arcs, FlowObjectiveWeights::default()).unwrap();
    assert_abs_diff_eq!(sol.flow_in[0][0][0], 5.0, epsilon = 1e-9);
    assert_abs_diff_eq!(sol.flow_out[0][0][0], 5.0, epsilon = 1e-9);
}

#[test]
fn transport_matches_integer_enumeration() {
    // Two supply points, one center, two affected areas.
    let mut inst = ProblemInstance::zeros(Dims::new(2, 1, 2, 1));
    inst.shortage_penalty = vec![6.0, 5.0];
    inst.demand = vec![vec![3.0, 2.0]];
    inst.supply = vec![vec![2.0, 2.0]];
    inst.cost_in = vec![vec![1.0], vec![2.0]];
    inst.cost_out = vec![vec![1.0, 4.0]];
    inst.cap_in = vec![vec![2.0], vec![2.0]];
    inst.cap_out = vec![vec![3.0, 2.0]];
    inst.vehicle_capacity = vec![10.0];
    inst.dist_out = vec![vec![1.0, 1.0]];
    inst.coverage_radius = vec![5.0];
    let arcs = [
        ArcId::In { m: 0, i: 0, j: 0 },
        ArcId::In { m: 0, i: 1, j: 0 },
        ArcId::Out { m: 0, j: 0, k: 0 },
        ArcId::Out { m: 0, j: 0, k: 1 },
    ];
    let w = FlowObjectiveWeights::default();
    let value = |a: f64, b: f64, c: f64, d: f64| {
        6.0 * (3.0 - c) + 5.0 * (2.0 - d) + a + 2.0 * b + c + 4.0 * d
    };
    let mut best = f64::INFINITY;
    for a in 0..=2 {
        for b in 0..=2 {
            for c in 0..=3 {
                for d in 0..=2 {
                    if a + b == c + d {
                        best = best.min(value(a as f64, b as f64, c as f64, d as f64));
                    }
                }
            }
        }
    }
    let sol = min_cost_transport(&inst, &[true], &arcs, w).unwrap();
    let got = value(
        sol.flow_in[0][0][0],
        sol.flow_in[0][1][0],
        sol.flow_out[0][0][0],
        sol.flow_out[0][0][1],
    );
    assert_abs_diff_eq!(got, best, epsilon = 1e-9);
}

#[test]
fn brute_force_refuses_large_instances() {
    let mut inst = ProblemInstance::zeros(Dims::new(3, 6, 6, 2));
    for m in 0..2 {
        inst.demand[m] = vec![20.0; 6];
        inst.supply[m] = vec![20.0; 3];
    }
    inst.cap_in = vec![vec![20.0; 6]; 3];
    inst.cap_out = vec![vec![20.0; 6]; 6];
    inst.vehicle_capacity = vec![100.0; 2];
    inst.dist_out = vec![vec![1.0; 6]; 6];
    inst.coverage_radius = vec![5.0; 2];
    assert!(matches!(
        brute_force_front(&inst),
        Err(Error::TooLarge { .. })
    ));
}
