//! Canonical deterministic location–distribution model.
//!
//! Supply points `i` ship to relief distribution centers `j`, which ship on to
//! affected areas `k`. Every flow is indexed by a vehicle class `m`; a class
//! carries its own capacity, coverage radius, speed and arc times, so the
//! product and equipment dimensions are folded into it.
//!
//! Three objectives are minimized:
//!
//! * `f1` – shortage cost `Σ π_k · max(0, d_mk − Σ_j y_mjk)`,
//! * `f2` – inbound and outbound transport cost plus center setup cost,
//! * `f3` – total response time, the sum of arc times over *active* arcs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A flow counts as active for the response-time objective above this level.
pub const ACTIVE_FLOW_TOL: f64 = 1e-9;

/// Default tolerance used by [`check_feasibility`].
pub const FEASIBILITY_TOL: f64 = 1e-6;

/// Current version of the instance file schema.
pub const SCHEMA_VERSION: u32 = 1;

/// Set cardinalities `|I|`, `|J|`, `|K|`, `|M|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dims {
    #[serde(rename = "I")]
    pub supply: usize,
    #[serde(rename = "J")]
    pub centers: usize,
    #[serde(rename = "K")]
    pub affected: usize,
    #[serde(rename = "M")]
    pub vehicles: usize,
}

impl Dims {
    pub fn new(supply: usize, centers: usize, affected: usize, vehicles: usize) -> Self {
        Self {
            supply,
            centers,
            affected,
            vehicles,
        }
    }
}

/// All sets and parameters of the model. Immutable once built and freely
/// shared between worker threads.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemInstance {
    pub dims: Dims,
    /// `F_j`
    pub setup_cost: Vec<f64>,
    /// `π_k`
    pub shortage_penalty: Vec<f64>,
    /// `d_mk`
    pub demand: Vec<Vec<f64>>,
    /// `s_mi`
    pub supply: Vec<Vec<f64>>,
    /// `c_ij`
    pub cost_in: Vec<Vec<f64>>,
    /// `c_jk`
    pub cost_out: Vec<Vec<f64>>,
    /// `N_ij`
    pub cap_in: Vec<Vec<f64>>,
    /// `N_jk`
    pub cap_out: Vec<Vec<f64>>,
    pub vehicle_capacity: Vec<f64>,
    /// `[m][i][j]`
    pub time_in: Vec<Vec<Vec<f64>>>,
    /// `[m][j][k]`
    pub time_out: Vec<Vec<Vec<f64>>>,
    pub dist_out: Vec<Vec<f64>>,
    pub coverage_radius: Vec<f64>,
    pub speed: Vec<f64>,
    pub max_open_centers: usize,
}

/// On-disk form of an instance: the instance fields plus schema metadata.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(flatten)]
    pub instance: ProblemInstance,
}

impl InstanceFile {
    pub fn new(instance: ProblemInstance, seed: Option<u64>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            seed,
            instance,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text)?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(Error::Shape(format!(
                "unsupported schema_version {}",
                file.schema_version
            )));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

impl ProblemInstance {
    /// An instance of the given shape with every parameter zero, except
    /// `max_open_centers = |J|`.
    pub fn zeros(dims: Dims) -> Self {
        let Dims {
            supply: ni,
            centers: nj,
            affected: nk,
            vehicles: nm,
        } = dims;
        Self {
            dims,
            setup_cost: vec![0.0; nj],
            shortage_penalty: vec![0.0; nk],
            demand: vec![vec![0.0; nk]; nm],
            supply: vec![vec![0.0; ni]; nm],
            cost_in: vec![vec![0.0; nj]; ni],
            cost_out: vec![vec![0.0; nk]; nj],
            cap_in: vec![vec![0.0; nj]; ni],
            cap_out: vec![vec![0.0; nk]; nj],
            vehicle_capacity: vec![0.0; nm],
            time_in: vec![vec![vec![0.0; nj]; ni]; nm],
            time_out: vec![vec![vec![0.0; nk]; nj]; nm],
            dist_out: vec![vec![0.0; nk]; nj],
            coverage_radius: vec![0.0; nm],
            speed: vec![1.0; nm],
            max_open_centers: nj.max(1),
        }
    }

    /// Whether vehicle class `m` may serve arc `j → k`.
    #[inline]
    pub fn admissible(&self, m: usize, j: usize, k: usize) -> bool {
        self.dist_out[j][k] <= self.coverage_radius[m]
    }

    /// `Σ_{m,k} π_k · d_mk`, the shortage cost of shipping nothing.
    pub fn total_shortage_cost(&self) -> f64 {
        self.demand
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&self.shortage_penalty)
                    .map(|(d, p)| d * p)
                    .sum::<f64>()
            })
            .sum()
    }

    pub fn zero_solution(&self) -> Solution {
        Solution::zeros(self.dims)
    }
}

/// Open-center vector plus vehicle-indexed flow tensors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub open: Vec<bool>,
    /// `[m][i][j]`
    pub flow_in: Vec<Vec<Vec<f64>>>,
    /// `[m][j][k]`
    pub flow_out: Vec<Vec<Vec<f64>>>,
}

impl Solution {
    pub fn zeros(dims: Dims) -> Self {
        Self {
            open: vec![false; dims.centers],
            flow_in: vec![vec![vec![0.0; dims.centers]; dims.supply]; dims.vehicles],
            flow_out: vec![vec![vec![0.0; dims.affected]; dims.centers]; dims.vehicles],
        }
    }

    pub fn open_count(&self) -> usize {
        self.open.iter().filter(|&&o| o).count()
    }

    fn check_shape(&self, dims: Dims) -> Result<()> {
        let ok = self.open.len() == dims.centers
            && tensor_shape_is(&self.flow_in, dims.vehicles, dims.supply, dims.centers)
            && tensor_shape_is(&self.flow_out, dims.vehicles, dims.centers, dims.affected);
        if ok {
            Ok(())
        } else {
            Err(Error::Shape(
                "solution dimensions do not match the instance".into(),
            ))
        }
    }
}

fn tensor_shape_is(t: &[Vec<Vec<f64>>], a: usize, b: usize, c: usize) -> bool {
    t.len() == a && t.iter().all(|x| matrix_shape_is(x, b, c))
}

fn matrix_shape_is(t: &[Vec<f64>], a: usize, b: usize) -> bool {
    t.len() == a && t.iter().all(|row| row.len() == b)
}

/// The three objective values of a solution, all minimized.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ObjectiveVector {
    /// Shortage cost.
    pub f1: f64,
    /// Transport plus setup cost.
    pub f2: f64,
    /// Total response time.
    pub f3: f64,
}

impl ObjectiveVector {
    pub const fn new(f1: f64, f2: f64, f3: f64) -> Self {
        Self { f1, f2, f3 }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.f1, self.f2, self.f3]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    /// Component by objective position (0 = f1, 1 = f2, 2 = f3).
    pub fn get(&self, objective: Objective) -> f64 {
        match objective {
            Objective::Shortage => self.f1,
            Objective::Cost => self.f2,
            Objective::Time => self.f3,
        }
    }

    /// Componentwise equality within `tol`, scaled by magnitude.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .all(|(a, b)| (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs())))
    }
}

/// Objective identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Objective {
    Shortage,
    Cost,
    Time,
}

impl Objective {
    pub const ALL: [Objective; 3] = [Objective::Shortage, Objective::Cost, Objective::Time];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// A single violated check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub constraint: String,
    pub index: Vec<usize>,
    /// How far the check is violated; `NaN` for shape and NaN reports.
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub violations: Vec<Violation>,
}

impl FeasibilityReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        Self {
            feasible: violations.is_empty(),
            violations,
        }
    }

    /// Whether any violation carries the given constraint id.
    pub fn has(&self, constraint: &str) -> bool {
        self.violations.iter().any(|v| v.constraint == constraint)
    }
}

struct Reporter {
    violations: Vec<Violation>,
}

impl Reporter {
    fn push(&mut self, constraint: impl Into<String>, index: Vec<usize>, magnitude: f64) {
        self.violations.push(Violation {
            constraint: constraint.into(),
            index,
            magnitude,
        });
    }

    fn values(&mut self, name: &str, values: &[f64], prefix: &[usize]) {
        for (n, &v) in values.iter().enumerate() {
            let mut index = prefix.to_vec();
            index.push(n);
            if v.is_nan() {
                self.push(format!("nan:{name}"), index, f64::NAN);
            } else if v < 0.0 {
                self.push(format!("sign:{name}"), index, -v);
            }
        }
    }

    fn vector(&mut self, name: &str, values: &[f64], len: usize) {
        if values.len() != len {
            self.push(format!("dim:{name}"), vec![], f64::NAN);
        } else {
            self.values(name, values, &[]);
        }
    }

    fn matrix(&mut self, name: &str, values: &[Vec<f64>], rows: usize, cols: usize) {
        if !matrix_shape_is(values, rows, cols) {
            self.push(format!("dim:{name}"), vec![], f64::NAN);
        } else {
            for (r, row) in values.iter().enumerate() {
                self.values(name, row, &[r]);
            }
        }
    }

    fn tensor(&mut self, name: &str, values: &[Vec<Vec<f64>>], a: usize, b: usize, c: usize) {
        if !tensor_shape_is(values, a, b, c) {
            self.push(format!("dim:{name}"), vec![], f64::NAN);
        } else {
            for (x, mat) in values.iter().enumerate() {
                for (y, row) in mat.iter().enumerate() {
                    self.values(name, row, &[x, y]);
                }
            }
        }
    }
}

/// Reports every dimension mismatch, negative parameter or NaN in `inst`.
///
/// Ids are `dim:<field>`, `sign:<field>` and `nan:<field>`.
pub fn validate_instance(inst: &ProblemInstance) -> FeasibilityReport {
    let mut r = Reporter { violations: vec![] };
    let Dims {
        supply: ni,
        centers: nj,
        affected: nk,
        vehicles: nm,
    } = inst.dims;
    if ni == 0 || nj == 0 || nk == 0 || nm == 0 {
        r.push("dim:dims", vec![ni, nj, nk, nm], f64::NAN);
    }
    r.vector("setup_cost", &inst.setup_cost, nj);
    r.vector("shortage_penalty", &inst.shortage_penalty, nk);
    r.matrix("demand", &inst.demand, nm, nk);
    r.matrix("supply", &inst.supply, nm, ni);
    r.matrix("cost_in", &inst.cost_in, ni, nj);
    r.matrix("cost_out", &inst.cost_out, nj, nk);
    r.matrix("cap_in", &inst.cap_in, ni, nj);
    r.matrix("cap_out", &inst.cap_out, nj, nk);
    r.vector("vehicle_capacity", &inst.vehicle_capacity, nm);
    r.tensor("time_in", &inst.time_in, nm, ni, nj);
    r.tensor("time_out", &inst.time_out, nm, nj, nk);
    r.matrix("dist_out", &inst.dist_out, nj, nk);
    r.vector("coverage_radius", &inst.coverage_radius, nm);
    r.vector("speed", &inst.speed, nm);
    if inst.max_open_centers < 1 {
        r.push("sign:max_open_centers", vec![], 1.0);
    }
    FeasibilityReport::from_violations(r.violations)
}

/// Evaluates `(f1, f2, f3)` for `sol`.
///
/// Shortage is clamped at zero per `(m, k)`, so over-delivery never earns a
/// negative cost. An arc contributes its time to `f3` as soon as its flow
/// exceeds [`ACTIVE_FLOW_TOL`], independently of the volume shipped.
pub fn evaluate_objectives(inst: &ProblemInstance, sol: &Solution) -> Result<ObjectiveVector> {
    sol.check_shape(inst.dims)?;
    let mut f1 = 0.0;
    let mut f2 = 0.0;
    let mut f3 = 0.0;
    for m in 0..inst.dims.vehicles {
        for k in 0..inst.dims.affected {
            let delivered: f64 = (0..inst.dims.centers).map(|j| sol.flow_out[m][j][k]).sum();
            f1 += inst.shortage_penalty[k] * (inst.demand[m][k] - delivered).max(0.0);
        }
        for (i, row) in sol.flow_in[m].iter().enumerate() {
            for (j, &q) in row.iter().enumerate() {
                f2 += inst.cost_in[i][j] * q;
                if q > ACTIVE_FLOW_TOL {
                    f3 += inst.time_in[m][i][j];
                }
            }
        }
        for (j, row) in sol.flow_out[m].iter().enumerate() {
            for (k, &y) in row.iter().enumerate() {
                f2 += inst.cost_out[j][k] * y;
                if y > ACTIVE_FLOW_TOL {
                    f3 += inst.time_out[m][j][k];
                }
            }
        }
    }
    for (j, &open) in sol.open.iter().enumerate() {
        if open {
            f2 += inst.setup_cost[j];
        }
    }
    Ok(ObjectiveVector::new(f1, f2, f3))
}

/// Checks `sol` against every model constraint, each within `tol`.
///
/// Constraint ids:
///
/// | id            | check                                                     |
/// |---------------|-----------------------------------------------------------|
/// | `conservation`| `Σ_i Q_mij = Σ_k Y_mjk` per `(m, j)`                      |
/// | `supply`      | `Σ_j Q_mij ≤ s_mi` per `(m, i)`                           |
/// | `demand`      | `Σ_j Y_mjk ≤ d_mk` per `(m, k)`                           |
/// | `closed-in`   | `Q_mij = 0` when center `j` is closed                     |
/// | `closed-out`  | `Y_mjk = 0` when center `j` is closed                     |
/// | `cap-in`      | `Q_mij ≤ N_ij`                                            |
/// | `cap-out`     | `Y_mjk ≤ N_jk`                                            |
/// | `vehicle`     | `Σ_{j,k} Y_mjk ≤ V_m`                                     |
/// | `coverage`    | `Y_mjk = 0` when `dist_out[j][k] > coverage_radius[m]`    |
/// | `budget`      | `Σ_j z_j ≤ max_open_centers`                              |
/// | `sign-in`, `sign-out` | non-negative, finite flows                        |
pub fn check_feasibility(
    inst: &ProblemInstance,
    sol: &Solution,
    tol: f64,
) -> Result<FeasibilityReport> {
    sol.check_shape(inst.dims)?;
    let Dims {
        supply: ni,
        centers: nj,
        affected: nk,
        vehicles: nm,
    } = inst.dims;
    let mut r = Reporter { violations: vec![] };

    for m in 0..nm {
        for i in 0..ni {
            for j in 0..nj {
                let q = sol.flow_in[m][i][j];
                if !q.is_finite() || q < -tol {
                    r.push("sign-in", vec![m, i, j], if q.is_finite() { -q } else { f64::NAN });
                    continue;
                }
                if !sol.open[j] && q > tol {
                    r.push("closed-in", vec![m, i, j], q);
                }
                if q > inst.cap_in[i][j] + tol {
                    r.push("cap-in", vec![m, i, j], q - inst.cap_in[i][j]);
                }
            }
        }
        for j in 0..nj {
            for k in 0..nk {
                let y = sol.flow_out[m][j][k];
                if !y.is_finite() || y < -tol {
                    r.push("sign-out", vec![m, j, k], if y.is_finite() { -y } else { f64::NAN });
                    continue;
                }
                if !sol.open[j] && y > tol {
                    r.push("closed-out", vec![m, j, k], y);
                }
                if y > inst.cap_out[j][k] + tol {
                    r.push("cap-out", vec![m, j, k], y - inst.cap_out[j][k]);
                }
                if y > tol && !inst.admissible(m, j, k) {
                    r.push("coverage", vec![m, j, k], y);
                }
            }
        }
        for j in 0..nj {
            let inflow: f64 = (0..ni).map(|i| sol.flow_in[m][i][j]).sum();
            let outflow: f64 = sol.flow_out[m][j].iter().sum();
            if (inflow - outflow).abs() > tol {
                r.push("conservation", vec![m, j], (inflow - outflow).abs());
            }
        }
        for i in 0..ni {
            let shipped: f64 = sol.flow_in[m][i].iter().sum();
            if shipped > inst.supply[m][i] + tol {
                r.push("supply", vec![m, i], shipped - inst.supply[m][i]);
            }
        }
        for k in 0..nk {
            let delivered: f64 = (0..nj).map(|j| sol.flow_out[m][j][k]).sum();
            if delivered > inst.demand[m][k] + tol {
                r.push("demand", vec![m, k], delivered - inst.demand[m][k]);
            }
        }
        let carried: f64 = sol.flow_out[m].iter().flatten().sum();
        if carried > inst.vehicle_capacity[m] + tol {
            r.push("vehicle", vec![m], carried - inst.vehicle_capacity[m]);
        }
    }
    let open = sol.open_count();
    if open > inst.max_open_centers {
        r.push("budget", vec![], (open - inst.max_open_centers) as f64);
    }
    Ok(FeasibilityReport::from_violations(r.violations))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::unit_instance;

    fn small_instance() -> ProblemInstance {
        let mut inst = ProblemInstance::zeros(Dims::new(2, 1, 2, 1));
        inst.setup_cost = vec![3.0];
        inst.shortage_penalty = vec![4.0, 5.0];
        inst.demand = vec![vec![2.0, 3.0]];
        inst.supply = vec![vec![4.0, 4.0]];
        inst.cost_in = vec![vec![1.0], vec![2.0]];
        inst.cost_out = vec![vec![1.0, 1.0]];
        inst.cap_in = vec![vec![5.0], vec![5.0]];
        inst.cap_out = vec![vec![5.0, 5.0]];
        inst.vehicle_capacity = vec![10.0];
        inst.time_in = vec![vec![vec![1.0], vec![1.0]]];
        inst.time_out = vec![vec![vec![1.0, 1.0]]];
        inst.dist_out = vec![vec![1.0, 1.0]];
        inst.coverage_radius = vec![5.0];
        inst
    }

    #[test]
    fn well_formed_instance_validates() {
        assert!(validate_instance(&small_instance()).feasible);
    }

    #[test]
    fn wrong_demand_length_is_a_dim_violation() {
        let mut inst = small_instance();
        inst.demand[0].pop();
        let rep = validate_instance(&inst);
        assert!(!rep.feasible);
        assert!(rep.has("dim:demand"));
    }

    #[test]
    fn negative_supply_is_a_sign_violation() {
        let mut inst = small_instance();
        inst.supply[0][0] = -1.0;
        let rep = validate_instance(&inst);
        assert!(rep.has("sign:supply"));
        assert_eq!(rep.violations.len(), 1);
    }

    #[test]
    fn nan_is_reported() {
        let mut inst = small_instance();
        inst.cost_out[0][1] = f64::NAN;
        assert!(validate_instance(&inst).has("nan:cost_out"));
    }

    #[test]
    fn zero_flow_objectives() {
        let inst = small_instance();
        let v = evaluate_objectives(&inst, &inst.zero_solution()).unwrap();
        assert_eq!(v, ObjectiveVector::new(4.0 * 2.0 + 5.0 * 3.0, 0.0, 0.0));
    }

    #[test]
    fn unit_instance_full_delivery() {
        let inst = unit_instance();
        let mut sol = inst.zero_solution();
        sol.open[0] = true;
        sol.flow_in[0][0][0] = 5.0;
        sol.flow_out[0][0][0] = 5.0;
        // f2 = 5·1 + 5·3 + 10, f3 = 4 + 6
        let v = evaluate_objectives(&inst, &sol).unwrap();
        assert_eq!(v, ObjectiveVector::new(0.0, 30.0, 10.0));
        assert!(check_feasibility(&inst, &sol, FEASIBILITY_TOL).unwrap().feasible);
    }

    #[test]
    fn met_demand_has_zero_shortage() {
        let inst = small_instance();
        let mut sol = inst.zero_solution();
        sol.open[0] = true;
        sol.flow_in[0][0][0] = 4.0;
        sol.flow_in[0][1][0] = 1.0;
        sol.flow_out[0][0] = vec![2.0, 3.0];
        assert_eq!(evaluate_objectives(&inst, &sol).unwrap().f1, 0.0);
        assert!(check_feasibility(&inst, &sol, FEASIBILITY_TOL).unwrap().feasible);
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let inst = small_instance();
        let sol = Solution::zeros(Dims::new(1, 1, 1, 1));
        assert!(matches!(
            evaluate_objectives(&inst, &sol),
            Err(Error::Shape(_))
        ));
        assert!(check_feasibility(&inst, &sol, 1e-6).is_err());
    }

    #[test]
    fn flow_through_closed_center_is_reported() {
        let inst = small_instance();
        let mut sol = inst.zero_solution();
        sol.flow_in[0][0][0] = 1.0;
        sol.flow_out[0][0][0] = 1.0;
        let rep = check_feasibility(&inst, &sol, FEASIBILITY_TOL).unwrap();
        assert!(rep.has("closed-out"));
        assert!(rep.has("closed-in"));
    }

    #[test]
    fn flow_beyond_coverage_radius_is_reported() {
        let mut inst = small_instance();
        inst.dist_out[0][0] = 30.0;
        inst.coverage_radius[0] = 20.0;
        let mut sol = inst.zero_solution();
        sol.open[0] = true;
        sol.flow_in[0][0][0] = 1.0;
        sol.flow_out[0][0][0] = 1.0;
        let rep = check_feasibility(&inst, &sol, FEASIBILITY_TOL).unwrap();
        assert!(rep.has("coverage"));
        assert_eq!(rep.violations.len(), 1);
    }

    #[test]
    fn each_capacity_check_fires() {
        let inst = small_instance();
        let mut sol = inst.zero_solution();
        sol.open[0] = true;
        sol.flow_in[0][0][0] = 6.0;
        sol.flow_out[0][0] = vec![3.0, 3.0];
        let rep = check_feasibility(&inst, &sol, FEASIBILITY_TOL).unwrap();
        assert!(rep.has("cap-in"));
        assert!(rep.has("supply"));
        assert!(rep.has("demand"));
        assert!(!rep.has("conservation"));

        let mut inst = inst;
        inst.vehicle_capacity = vec![4.0];
        inst.max_open_centers = 1;
        let mut sol = inst.zero_solution();
        sol.open[0] = true;
        sol.flow_in[0][0][0] = 4.0;
        sol.flow_in[0][1][0] = 1.0;
        sol.flow_out[0][0] = vec![2.0, 2.0];
        let rep = check_feasibility(&inst, &sol, FEASIBILITY_TOL).unwrap();
        assert!(rep.has("conservation"));
        sol.flow_in[0][1][0] = 0.0;
        sol.flow_out[0][0] = vec![2.0, 2.0];
        assert!(check_feasibility(&inst, &sol, FEASIBILITY_TOL).unwrap().feasible);
        sol.flow_in[0][1][0] = 1.0;
        sol.flow_out[0][0] = vec![2.0, 3.0];
        assert!(check_feasibility(&inst, &sol, FEASIBILITY_TOL).unwrap().has("vehicle"));
    }

    #[test]
    fn budget_is_checked() {
        let mut inst = ProblemInstance::zeros(Dims::new(1, 3, 1, 1));
        inst.max_open_centers = 1;
        let mut sol = inst.zero_solution();
        sol.open = vec![true, true, false];
        assert!(check_feasibility(&inst, &sol, FEASIBILITY_TOL).unwrap().has("budget"));
    }

    #[test]
    fn instance_file_round_trip_uses_documented_field_names() {
        let file = InstanceFile::new(small_instance(), Some(7));
        let text = file.to_json().unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        for field in [
            "dims",
            "setup_cost",
            "shortage_penalty",
            "demand",
            "supply",
            "cost_in",
            "cost_out",
            "cap_in",
            "cap_out",
            "vehicle_capacity",
            "time_in",
            "time_out",
            "dist_out",
            "coverage_radius",
            "speed",
            "max_open_centers",
            "seed",
            "schema_version",
        ] {
            assert!(value.get(field).is_some(), "missing {field}");
        }
        assert_eq!(value["dims"]["I"], 2);
        let back = InstanceFile::from_json(&text).unwrap();
        assert_eq!(back.instance, file.instance);
    }

    #[test]
    fn wrong_schema_version_is_rejected() {
        let mut file = InstanceFile::new(small_instance(), None);
        file.schema_version = 2;
        let text = serde_json::to_string(&file).unwrap();
        assert!(InstanceFile::from_json(&text).is_err());
    }
}
