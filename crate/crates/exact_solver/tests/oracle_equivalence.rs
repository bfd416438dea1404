use exact_solver::{brute_force_front, epsilon_constraint_front_on_grid, EpsilonGrid, ExactConfig};
use instancegen::{generate, GenSpec};
use model_core::model::{Dims, ProblemInstance};

fn tiny(seed: u64) -> ProblemInstance {
    let i = 1 + (seed % 3) as usize;
    let j = 1 + (seed / 3 % 3) as usize;
    let k = 1 + (seed / 9 % 3) as usize;
    let m = 1 + (seed / 27 % 2) as usize;
    let spec = GenSpec {
        integral: true,
        ..GenSpec::new(Dims::new(i, j, k, m), 100 + seed)
            .with_range("N_in", 0.0, 3.0)
            .with_range("N_out", 0.0, 3.0)
            .with_range("d", 1.0, 3.0)
            .with_range("s", 1.0, 3.0)
            .with_range("V", 2.0, 4.0)
            .with_range("F", 1.0, 7.0)
            .with_range("pi", 5.0, 15.0)
            .with_range("c_in", 1.0, 7.0)
            .with_range("c_out", 1.0, 7.0)
            .with_range("dist_out", 20.0, 26.0)
            .with_range("P_N", 1.0, 3.0)
    };
    generate(&spec).unwrap()
}

#[test]
fn refined_front_equals_brute_force() {
    for seed in (1u64..54).step_by(2) {
        let inst = tiny(seed);
        let oracle = brute_force_front(&inst).unwrap();
        let mut eps2: Vec<f64> = oracle.objectives().iter().map(|v| v.f2).collect();
        let mut eps3: Vec<f64> = oracle.objectives().iter().map(|v| v.f3).collect();
        eps2.sort_by(f64::total_cmp);
        eps3.sort_by(f64::total_cmp);
        let front =
            epsilon_constraint_front_on_grid(&inst, &EpsilonGrid { eps2, eps3 }, &ExactConfig::default())
                .unwrap();
        assert_eq!(front.len(), oracle.len(), "seed {seed}");
        for (a, b) in front.objectives().iter().zip(oracle.objectives()) {
            assert!(a.approx_eq(&b, 1e-6), "seed {seed}: {a:?} vs {b:?}");
        }
    }
}
