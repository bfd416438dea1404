use super::*;
use instancegen::{generate, table7};
use model_core::model::evaluate_objectives;
use model_core::fixtures::unit_instance;
use nsga2::{decode, Chromosome};
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256StarStar;

fn shipping(inst: &ProblemInstance, amount: f64) -> Solution {
    let mut sol = inst.zero_solution();
    sol.open[0] = true;
    sol.flow_in[0][0][0] = amount;
    sol.flow_out[0][0][0] = amount;
    sol
}

fn random_solutions(inst: &ProblemInstance, n: usize) -> Vec<Solution> {
    let mut rng = Xoshiro256StarStar::seed_from_u64(5);
    (0..n)
        .map(|_| decode(&Chromosome::random(inst, &mut rng), inst).unwrap())
        .collect()
}

#[test]
fn trapezoid_order_is_checked() {
    assert!(Trapezoid::new(1.0, 2.0, 3.0, 6.0).is_ok());
    assert!(matches!(Trapezoid::new(2.0, 1.0, 3.0, 4.0), Err(Error::Range(_))));
    assert!(serde_json::from_str::<Trapezoid>("[4, 3, 2, 1]").is_err());
}

#[test]
fn expected_value_is_the_mean_of_points() {
    assert_eq!(expected_value(&Trapezoid::new(1.0, 2.0, 3.0, 6.0).unwrap()), 3.0);
    assert_eq!(expected_value(&Trapezoid::crisp(7.0)), 7.0);
}

#[test]
fn z_extremes_of_a_spread_outbound_cost() {
    let mut base = ProblemInstance::zeros(model_core::model::Dims::new(1, 1, 1, 1));
    base.demand = vec![vec![5.0]];
    base.supply = vec![vec![5.0]];
    base.cap_in = vec![vec![5.0]];
    base.cap_out = vec![vec![5.0]];
    base.vehicle_capacity = vec![5.0];
    base.coverage_radius = vec![1.0];
    let mut f = FuzzyInstance::from_crisp(&base);
    f.fuzzy_params.cost_out[0][0] = Trapezoid::new(1.0, 2.0, 3.0, 4.0).unwrap();
    assert_eq!(z_extremes(&f, &shipping(&base, 5.0)).unwrap(), (5.0, 20.0));
    assert_eq!(z_extremes(&f, &base.zero_solution()).unwrap(), (0.0, 0.0));
}

#[test]
fn degenerate_fuzzies_reduce_to_the_deterministic_cost() {
    let inst = generate(&table7()[2]).unwrap();
    let f = FuzzyInstance::from_crisp(&inst);
    for sol in random_solutions(&inst, 10) {
        let f2 = evaluate_objectives(&inst, &sol).unwrap().f2;
        let (zmin, zmax) = z_extremes(&f, &sol).unwrap();
        assert!((zmin - f2).abs() <= 1e-12 * (1.0 + f2));
        assert!((zmax - f2).abs() <= 1e-12 * (1.0 + f2));
        let rpp = rpp_objective(&f, &sol, &RppWeights::default()).unwrap();
        assert!((rpp - f2).abs() <= 1e-12 * (1.0 + f2));
        let spread = RppWeights {
            robustness: 1.0,
            ..RppWeights::default()
        };
        let rpp = rpp_objective(&f, &sol, &spread).unwrap();
        assert!((rpp - f2).abs() <= 1e-12 * (1.0 + f2));
    }
    let (crisp, desc) = build_crisp_instance(&f, &RppWeights::default()).unwrap();
    assert_eq!(crisp, inst);
    assert_eq!(desc.constant, 0.0);
}

#[test]
fn supply_penalty_of_a_two_point_supply() {
    let base = unit_instance();
    let mut f = FuzzyInstance::from_crisp(&base);
    f.fuzzy_params.setup_cost = vec![Trapezoid::crisp(0.0)];
    f.fuzzy_params.cost_in = vec![vec![Trapezoid::crisp(0.0)]];
    f.fuzzy_params.cost_out = vec![vec![Trapezoid::crisp(0.0)]];
    f.fuzzy_params.supply = vec![vec![Trapezoid::two_point(1.0, 3.0).unwrap()]];
    let w = RppWeights {
        supply_penalty: 2.0,
        alpha: 0.5,
        ..RppWeights::default()
    };
    let rpp = rpp_objective(&f, &base.zero_solution(), &w).unwrap();
    assert!((rpp - 2.0).abs() < 1e-12);
}

#[test]
fn supply_right_hand_side_at_its_level() {
    let base = unit_instance();
    let mut f = FuzzyInstance::from_crisp(&base);
    f.fuzzy_params.supply = vec![vec![Trapezoid::two_point(1.0, 3.0).unwrap()]];
    let half = RppWeights {
        alpha: 0.5,
        ..RppWeights::default()
    };
    assert_eq!(build_crisp_instance(&f, &half).unwrap().0.supply, vec![vec![2.0]]);
    let full = RppWeights::default();
    assert_eq!(build_crisp_instance(&f, &full).unwrap().0.supply, vec![vec![1.0]]);
}

fn fuzzed(inst: &ProblemInstance) -> FuzzyInstance {
    let widen = |x: f64| Trapezoid::new(0.8 * x, 0.9 * x, 1.1 * x, 1.3 * x).unwrap();
    let two = |x: f64| Trapezoid::two_point(x, 1.5 * x).unwrap();
    let mut f = FuzzyInstance::from_crisp(inst);
    let p = &mut f.fuzzy_params;
    p.setup_cost = inst.setup_cost.iter().map(|x| widen(*x)).collect();
    p.cost_in = inst.cost_in.iter().map(|r| r.iter().map(|x| widen(*x)).collect()).collect();
    p.cost_out = inst.cost_out.iter().map(|r| r.iter().map(|x| widen(*x)).collect()).collect();
    p.supply = inst.supply.iter().map(|r| r.iter().map(|x| two(*x)).collect()).collect();
    p.demand = inst.demand.iter().map(|r| r.iter().map(|x| two(*x)).collect()).collect();
    p.cap_in = inst.cap_in.iter().map(|r| r.iter().map(|x| two(*x)).collect()).collect();
    p.cap_out = inst.cap_out.iter().map(|r| r.iter().map(|x| two(*x)).collect()).collect();
    f
}

fn some_weights() -> RppWeights {
    RppWeights {
        robustness: 0.5,
        supply_penalty: 1.0,
        demand_penalty: 2.0,
        cap_in_penalty: 0.3,
        cap_out_penalty: 0.2,
        demand_penalty_2: 0.7,
        supply_penalty_2: 0.1,
        alpha: 0.6,
        beta: 0.7,
        mu: 0.8,
        rho: 0.9,
        phi: 0.55,
        varphi: 0.65,
    }
}

#[test]
fn expected_cost_lies_between_extremes() {
    let inst = generate(&table7()[3]).unwrap();
    let f = fuzzed(&inst);
    for sol in random_solutions(&inst, 20) {
        let (zmin, zmax) = z_extremes(&f, &sol).unwrap();
        let ev = expected_cost(&f, &sol).unwrap();
        assert!(zmin <= ev + 1e-9 && ev <= zmax + 1e-9);
    }
}

#[test]
fn objective_grows_with_each_weight() {
    let inst = generate(&table7()[1]).unwrap();
    let f = fuzzed(&inst);
    let w = some_weights();
    let bumps: [fn(&mut RppWeights); 7] = [
        |w| w.robustness += 1.0,
        |w| w.supply_penalty += 1.0,
        |w| w.demand_penalty += 1.0,
        |w| w.cap_in_penalty += 1.0,
        |w| w.cap_out_penalty += 1.0,
        |w| w.demand_penalty_2 += 1.0,
        |w| w.supply_penalty_2 += 1.0,
    ];
    for sol in random_solutions(&inst, 5) {
        let before = rpp_objective(&f, &sol, &w).unwrap();
        for bump in bumps {
            let mut more = w;
            bump(&mut more);
            assert!(rpp_objective(&f, &sol, &more).unwrap() >= before);
        }
    }
}

#[test]
fn descriptor_scores_the_full_objective() {
    let inst = generate(&table7()[2]).unwrap();
    let f = fuzzed(&inst);
    let w = some_weights();
    let (crisp, desc) = build_crisp_instance(&f, &w).unwrap();
    for sol in random_solutions(&inst, 10) {
        let direct = rpp_objective(&f, &sol, &w).unwrap();
        let via = desc.evaluate(&crisp, &sol).unwrap();
        assert!((direct - via).abs() <= 1e-9 * (1.0 + direct.abs()));
    }
}

#[test]
fn shortage_uses_expected_demand() {
    let base = unit_instance();
    let mut f = FuzzyInstance::from_crisp(&base);
    f.fuzzy_params.demand = vec![vec![Trapezoid::new(2.0, 4.0, 6.0, 8.0).unwrap()]];
    assert_eq!(expected_shortage_cost(&f, &base.zero_solution()).unwrap(), 10.0);
    assert_eq!(expected_shortage_cost(&f, &shipping(&base, 3.0)).unwrap(), 4.0);
}

#[test]
fn levels_outside_range_are_rejected() {
    let w = RppWeights {
        beta: 0.4,
        ..RppWeights::default()
    };
    assert!(matches!(w.validate(), Err(Error::Config(_))));
}

#[test]
fn fuzzy_file_round_trip() {
    let f = fuzzed(&unit_instance());
    let file = FuzzyFile::new(f, some_weights());
    let text = file.to_json().unwrap();
    assert!(text.contains("\"fuzzy\": true"));
    assert_eq!(FuzzyFile::from_json(&text).unwrap(), file);
    let crisp = model_core::model::InstanceFile::new(unit_instance(), None).to_json().unwrap();
    assert!(FuzzyFile::from_json(&crisp).is_err());
}

fn level_times_binary() -> (LinearizedModel, usize) {
    let mut m = BilinearModel::default();
    let mu = m.add_var(VarKind::Continuous {
        lower: 0.5,
        upper: 1.0,
    });
    let z = m.add_var(VarKind::Binary);
    let p = m.add_product(mu, z);
    (linearize_products(&m).unwrap(), p)
}

#[test]
fn envelope_fixes_the_product() {
    let (lin, p) = level_times_binary();
    assert_eq!(lin.constraints.len(), 4);
    assert_eq!(feasible_interval(&lin, p, &[0.7, 0.0]).unwrap(), Some((0.0, 0.0)));
    for mu in [0.5, 0.7, 1.0] {
        for z in [0.0, 1.0] {
            let (lo, hi) = feasible_interval(&lin, p, &[mu, z]).unwrap().unwrap();
            assert!((lo - mu * z).abs() < 1e-12 && (hi - mu * z).abs() < 1e-12);
        }
    }
}

#[test]
fn substituted_capacity_penalty_matches_the_product_form() {
    // ((z - v)·N2 + v·N1 - z·N1) with v = μz equals ((1 - μ)N2 + μN1 - N1)·z.
    let (n1, n2): (f64, f64) = (3.0, 7.0);
    for mu in [0.5, 0.75, 1.0] {
        for z in [0.0, 1.0] {
            let v = mu * z;
            let substituted = (z - v) * n2 + v * n1 - z * n1;
            let product = ((1.0 - mu) * n2 + mu * n1 - n1) * z;
            assert!((substituted - product).abs() < 1e-12);
        }
    }
}

#[test]
fn continuous_products_are_refused() {
    let mut m = BilinearModel::default();
    let a = m.add_var(VarKind::Continuous {
        lower: 0.0,
        upper: 1.0,
    });
    let b = m.add_var(VarKind::Continuous {
        lower: 0.0,
        upper: 1.0,
    });
    m.add_product(a, b);
    assert!(matches!(linearize_products(&m), Err(Error::NotLinearizable(_))));
}

#[test]
fn binary_products_become_logical_and() {
    let mut m = BilinearModel::default();
    let a = m.add_var(VarKind::Binary);
    let b = m.add_var(VarKind::Binary);
    let p = m.add_product(a, b);
    let lin = linearize_products(&m).unwrap();
    for x in [0.0, 1.0] {
        for y in [0.0, 1.0] {
            assert_eq!(feasible_interval(&lin, p, &[x, y]).unwrap(), Some((x * y, x * y)));
        }
    }
}
