use proptest::prelude::*;
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256StarStar;

use instancegen::{generate, GenSpec};
use model_core::model::{check_feasibility, Dims, ObjectiveVector, FEASIBILITY_TOL};
use model_core::pareto::dominates;
use nsga2::{crowding_distance, decode, fast_nondominated_sort, Chromosome};

fn dims() -> impl Strategy<Value = Dims> {
    (1usize..4, 1usize..5, 1usize..5, 1usize..3).prop_map(|(i, j, k, m)| Dims::new(i, j, k, m))
}

/// Rank by the definition: peel off the points no remaining point dominates.
fn rank_oracle(objs: &[ObjectiveVector]) -> Vec<usize> {
    let mut rank = vec![0; objs.len()];
    let mut left: Vec<usize> = (0..objs.len()).collect();
    let mut r = 1;
    while !left.is_empty() {
        let front: Vec<usize> = left
            .iter()
            .copied()
            .filter(|&p| !left.iter().any(|&q| dominates(&objs[q], &objs[p])))
            .collect();
        for &p in &front {
            rank[p] = r;
        }
        left.retain(|p| !front.contains(p));
        r += 1;
    }
    rank
}

fn population() -> impl Strategy<Value = Vec<ObjectiveVector>> {
    prop::collection::vec((0u8..6, 0u8..6, 0u8..6), 1..40).prop_map(|v| {
        v.into_iter()
            .map(|(a, b, c)| ObjectiveVector::new(a as f64, b as f64, c as f64))
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decoded_solutions_are_feasible(d in dims(), seed in 0u64..1000, chrom_seed in any::<u64>(), cap in 1usize..4) {
        let mut inst = generate(&GenSpec::new(d, seed)).unwrap();
        inst.max_open_centers = cap.min(d.centers);
        let mut rng = Xoshiro256StarStar::seed_from_u64(chrom_seed);
        let chrom = Chromosome::random(&inst, &mut rng);
        let sol = decode(&chrom, &inst).unwrap();
        prop_assert!(sol.open_count() <= inst.max_open_centers);
        let report = check_feasibility(&inst, &sol, FEASIBILITY_TOL).unwrap();
        prop_assert!(report.feasible, "{:?}", report.violations);
    }

    #[test]
    fn sort_matches_the_definition(objs in population()) {
        let fronts = fast_nondominated_sort(&objs);
        let expected = rank_oracle(&objs);
        let mut got = vec![0; objs.len()];
        for (r, f) in fronts.iter().enumerate() {
            for &p in f {
                got[p] = r + 1;
            }
        }
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn crowding_extremes_are_infinite(objs in population()) {
        for front in fast_nondominated_sort(&objs) {
            let cd = crowding_distance(&objs, &front);
            for o in 0..3 {
                let vals: Vec<f64> = front.iter().map(|&p| objs[p].as_array()[o]).collect();
                let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                // At least one point attaining each extreme is a boundary point.
                prop_assert!(front.iter().zip(&cd).any(|(&p, c)| objs[p].as_array()[o] == lo && c.is_infinite()));
                prop_assert!(front.iter().zip(&cd).any(|(&p, c)| objs[p].as_array()[o] == hi && c.is_infinite()));
            }
        }
    }
}
