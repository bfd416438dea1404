//! Seeded random instances.
//!
//! Every parameter is drawn i.i.d. uniform from a named range. The stream is
//! xoshiro256** seeded through SplitMix64 (`seed_from_u64`), and a uniform
//! draw is `low + (high - low) * ((x >> 11) * 2^-53)`, so an implementation
//! in any language reproduces the same instance from the same seed.
//!
//! Draw order: `F`, `pi`, `d`, `s`, `c_in`, `c_out`, `N_in`, `N_out`, `V`,
//! `speed`, `R`, `dist_in`, `dist_out`, `P_N`, then the auxiliary parameters
//! in [`AUX_PARAMS`] order. Matrices are drawn row-major.

use std::collections::BTreeMap;

use rand::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use serde::{Deserialize, Serialize};

use model_core::error::{Error, Result};
use model_core::model::{Dims, ProblemInstance};

/// Parameters that the model uses, with their default ranges.
pub const MODEL_PARAMS: [(&str, f64, f64); 14] = [
    ("F", 5.0, 7.0),
    ("pi", 5.0, 7.0),
    ("d", 5.0, 7.0),
    ("s", 5.0, 7.0),
    ("c_in", 5.0, 7.0),
    ("c_out", 5.0, 7.0),
    ("N_in", 50.0, 80.0),
    ("N_out", 50.0, 80.0),
    ("V", 20.0, 26.0),
    ("speed", 20.0, 26.0),
    ("R", 20.0, 26.0),
    ("dist_in", 20.0, 26.0),
    ("dist_out", 20.0, 26.0),
    ("P_N", 20.0, 26.0),
];

/// Parameters generated for completeness but not read by the model.
pub const AUX_PARAMS: [(&str, f64, f64); 7] = [
    ("x_dk", 1.0, 2.0),
    ("x_jj", 2.0, 3.0),
    ("e_ks", 4.0, 8.0),
    ("T_d", 20.0, 26.0),
    ("r_dh", 20.0, 26.0),
    ("x_jk", 50.0, 80.0),
    ("x_dj", 50.0, 80.0),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub dims: Dims,
    /// Overrides of the default ranges, by parameter name.
    #[serde(default)]
    pub ranges: BTreeMap<String, (f64, f64)>,
    pub seed: u64,
    /// Round every drawn value to the nearest integer.
    #[serde(default)]
    pub integral: bool,
}

impl GenSpec {
    pub fn new(dims: Dims, seed: u64) -> Self {
        Self {
            dims,
            ranges: BTreeMap::new(),
            seed,
            integral: false,
        }
    }

    pub fn with_range(mut self, name: &str, low: f64, high: f64) -> Self {
        self.ranges.insert(name.to_string(), (low, high));
        self
    }

    /// Effective range of `name`, or `None` for an unknown name.
    pub fn range(&self, name: &str) -> Option<(f64, f64)> {
        if let Some(r) = self.ranges.get(name) {
            return Some(*r);
        }
        MODEL_PARAMS
            .iter()
            .chain(&AUX_PARAMS)
            .find(|(n, _, _)| *n == name)
            .map(|(_, lo, hi)| (*lo, *hi))
    }

    fn validate(&self) -> Result<()> {
        let d = self.dims;
        if d.supply == 0 || d.centers == 0 || d.affected == 0 || d.vehicles == 0 {
            return Err(Error::Range("every dimension must be at least 1".into()));
        }
        for (name, (lo, hi)) in &self.ranges {
            if MODEL_PARAMS.iter().chain(&AUX_PARAMS).all(|p| p.0 != name) {
                return Err(Error::Range(format!("unknown parameter {name}")));
            }
            if !(lo.is_finite() && hi.is_finite()) || lo > hi || *lo < 0.0 {
                return Err(Error::Range(format!("bad range for {name}: ({lo}, {hi})")));
            }
        }
        Ok(())
    }
}

/// Values of the auxiliary parameters, flattened in draw order.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AuxBag {
    pub values: BTreeMap<String, Vec<f64>>,
}

struct Sampler {
    rng: Xoshiro256StarStar,
    integral: bool,
}

impl Sampler {
    fn draw(&mut self, (lo, hi): (f64, f64)) -> f64 {
        let u = (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        let x = lo + (hi - lo) * u;
        if self.integral {
            x.round()
        } else {
            x
        }
    }

    fn vec(&mut self, r: (f64, f64), n: usize) -> Vec<f64> {
        (0..n).map(|_| self.draw(r)).collect()
    }

    fn mat(&mut self, r: (f64, f64), rows: usize, cols: usize) -> Vec<Vec<f64>> {
        (0..rows).map(|_| self.vec(r, cols)).collect()
    }
}

pub fn generate(spec: &GenSpec) -> Result<ProblemInstance> {
    generate_with_aux(spec).map(|(inst, _)| inst)
}

pub fn generate_with_aux(spec: &GenSpec) -> Result<(ProblemInstance, AuxBag)> {
    spec.validate()?;
    let d = spec.dims;
    let r = |name: &str| spec.range(name).expect("known parameter");
    let mut s = Sampler {
        rng: Xoshiro256StarStar::seed_from_u64(spec.seed),
        integral: spec.integral,
    };

    let mut inst = ProblemInstance::zeros(d);
    inst.setup_cost = s.vec(r("F"), d.centers);
    inst.shortage_penalty = s.vec(r("pi"), d.affected);
    inst.demand = s.mat(r("d"), d.vehicles, d.affected);
    inst.supply = s.mat(r("s"), d.vehicles, d.supply);
    inst.cost_in = s.mat(r("c_in"), d.supply, d.centers);
    inst.cost_out = s.mat(r("c_out"), d.centers, d.affected);
    inst.cap_in = s.mat(r("N_in"), d.supply, d.centers);
    inst.cap_out = s.mat(r("N_out"), d.centers, d.affected);
    inst.vehicle_capacity = s.vec(r("V"), d.vehicles);
    inst.speed = s.vec(r("speed"), d.vehicles);
    inst.coverage_radius = s.vec(r("R"), d.vehicles);
    let dist_in = s.mat(r("dist_in"), d.supply, d.centers);
    inst.dist_out = s.mat(r("dist_out"), d.centers, d.affected);
    let pn = s.draw(r("P_N"));
    inst.max_open_centers = (pn.round().max(1.0) as usize).min(d.centers);

    inst.time_in = inst
        .speed
        .iter()
        .map(|v| time_matrix(&dist_in, *v))
        .collect();
    inst.time_out = inst
        .speed
        .iter()
        .map(|v| time_matrix(&inst.dist_out, *v))
        .collect();

    let sizes = [
        d.affected,
        d.centers * d.centers,
        d.affected * d.vehicles,
        d.vehicles,
        d.vehicles,
        d.centers * d.affected,
        d.centers,
    ];
    let mut aux = AuxBag::default();
    for ((name, _, _), n) in AUX_PARAMS.iter().zip(sizes) {
        aux.values.insert(name.to_string(), s.vec(r(name), n));
    }
    Ok((inst, aux))
}

fn time_matrix(dist: &[Vec<f64>], speed: f64) -> Vec<Vec<f64>> {
    dist.iter()
        .map(|row| {
            row.iter()
                .map(|x| if speed > 0.0 { x / speed } else { 0.0 })
                .collect()
        })
        .collect()
}

/// The five benchmark sizes `(I, J, K, M)`, seeded `7001..=7005`.
pub fn table7() -> Vec<GenSpec> {
    [(1, 1, 2, 2), (2, 3, 2, 2), (3, 4, 5, 3), (5, 2, 1, 5), (2, 12, 12, 2)]
        .iter()
        .enumerate()
        .map(|(r, &(i, j, k, m))| GenSpec::new(Dims::new(i, j, k, m), 7001 + r as u64))
        .collect()
}

/// The 22 scaling sizes `(I, J, K, M)`, seeded `6001..=6022`.
pub fn table6() -> Vec<GenSpec> {
    const ROWS: [(usize, usize, usize, usize); 22] = [
        (3, 1, 2, 3),
        (3, 2, 3, 3),
        (4, 2, 2, 2),
        (4, 2, 3, 3),
        (5, 2, 3, 2),
        (5, 3, 3, 3),
        (5, 3, 4, 4),
        (8, 4, 5, 3),
        (8, 4, 6, 4),
        (10, 4, 5, 3),
        (10, 5, 6, 3),
        (15, 7, 9, 3),
        (15, 8, 11, 3),
        (15, 9, 12, 4),
        (25, 12, 15, 4),
        (50, 25, 20, 4),
        (80, 30, 40, 4),
        (100, 40, 55, 4),
        (150, 60, 90, 4),
        (250, 100, 140, 4),
        (400, 150, 250, 4),
        (500, 200, 300, 4),
    ];
    ROWS.iter()
        .enumerate()
        .map(|(r, &(i, j, k, m))| GenSpec::new(Dims::new(i, j, k, m), 6001 + r as u64))
        .collect()
}

/// Both ladders.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaperLadder {
    pub table7: Vec<GenSpec>,
    pub table6: Vec<GenSpec>,
}

pub fn paper_ladder() -> PaperLadder {
    PaperLadder {
        table7: table7(),
        table6: table6(),
    }
}
