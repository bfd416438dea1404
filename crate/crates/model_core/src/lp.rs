//! Dense bounded-variable primal simplex.
//!
//! Solves `min cᵀx` subject to linear rows (`≤`, `≥`, `=`) and simple bounds
//! `l ≤ x ≤ u` with finite `l`. Phase one drives one artificial per row to
//! zero; phase two optimizes the real cost. Pricing is Dantzig's rule until a
//! run of degenerate pivots is seen, after which Bland's smallest-index rule
//! takes over until the objective moves again.

const PIVOT_TOL: f64 = 1e-9;
const OPT_TOL: f64 = 1e-9;
const FEAS_TOL: f64 = 1e-9;
const DEGENERATE_RUN: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Row {
    pub coeffs: Vec<(usize, f64)>,
    pub kind: RowKind,
    pub rhs: f64,
}

#[derive(Debug, Clone, Default)]
pub struct LinearProgram {
    pub cost: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub rows: Vec<Row>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, objective: f64 },
    Infeasible,
    Unbounded,
    /// Iteration cap reached; only expected on numerically hostile input.
    Stalled,
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a variable and returns its index.
    pub fn add_var(&mut self, cost: f64, lower: f64, upper: f64) -> usize {
        debug_assert!(lower.is_finite() && lower <= upper);
        self.cost.push(cost);
        self.lower.push(lower);
        self.upper.push(upper);
        self.cost.len() - 1
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, f64)>, kind: RowKind, rhs: f64) {
        self.rows.push(Row { coeffs, kind, rhs });
    }

    pub fn num_vars(&self) -> usize {
        self.cost.len()
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Status {
    Basic,
    AtLower,
    AtUpper,
}

struct Tableau {
    m: usize,
    cols: usize,
    n_struct: usize,
    /// Row-major `m × cols`, holds `B⁻¹ [A | S | R]`.
    t: Vec<f64>,
    /// Value of the basic variable of each row.
    xb: Vec<f64>,
    basis: Vec<usize>,
    status: Vec<Status>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    /// Reduced costs of the current phase.
    d: Vec<f64>,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let m = lp.rows.len();
        let n = lp.num_vars();
        // structural | slack per row | artificial per row
        let cols = n + 2 * m;
        let mut t = vec![0.0; m * cols];
        let mut lower = lp.lower.clone();
        let mut upper = lp.upper.clone();
        let mut status = vec![Status::AtLower; cols];
        for (r, row) in lp.rows.iter().enumerate() {
            for &(j, a) in &row.coeffs {
                t[r * cols + j] += a;
            }
            t[r * cols + n + r] = 1.0;
            let (lo, hi) = match row.kind {
                RowKind::Le => (0.0, f64::INFINITY),
                RowKind::Ge => (f64::NEG_INFINITY, 0.0),
                RowKind::Eq => (0.0, 0.0),
            };
            lower.push(lo);
            upper.push(hi);
            if row.kind == RowKind::Ge {
                status[n + r] = Status::AtUpper;
            }
        }
        // Structurals start at their lower bound, slacks at zero. The residual
        // decides the sign of each artificial column.
        let mut xb = vec![0.0; m];
        for (r, row) in lp.rows.iter().enumerate() {
            let activity: f64 = row.coeffs.iter().map(|&(j, a)| a * lp.lower[j]).sum();
            let resid = row.rhs - activity;
            let sign = if resid >= 0.0 { 1.0 } else { -1.0 };
            t[r * cols + n + m + r] = sign;
            // Scale the row so the artificial column becomes +1.
            if sign < 0.0 {
                for v in &mut t[r * cols..(r + 1) * cols] {
                    *v = -*v;
                }
            }
            xb[r] = resid.abs();
        }
        for _ in 0..m {
            lower.push(0.0);
            upper.push(f64::INFINITY);
        }
        let mut basis = Vec::with_capacity(m);
        for r in 0..m {
            basis.push(n + m + r);
            status[n + m + r] = Status::Basic;
        }
        Tableau {
            m,
            cols,
            n_struct: n,
            t,
            xb,
            basis,
            status,
            lower,
            upper,
            d: vec![0.0; cols],
        }
    }

    fn value(&self, j: usize) -> f64 {
        match self.status[j] {
            Status::AtLower => self.lower[j],
            Status::AtUpper => self.upper[j],
            Status::Basic => {
                let r = self.basis.iter().position(|&b| b == j).unwrap();
                self.xb[r]
            }
        }
    }

    fn set_reduced_costs(&mut self, cost: &[f64]) {
        self.d.copy_from_slice(cost);
        for r in 0..self.m {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                let row = &self.t[r * self.cols..(r + 1) * self.cols];
                for (dj, &a) in self.d.iter_mut().zip(row) {
                    *dj -= cb * a;
                }
            }
        }
    }

    fn objective(&self, cost: &[f64]) -> f64 {
        (0..self.cols).map(|j| cost[j] * self.value(j)).sum()
    }

    fn run(mut self, lp: &LinearProgram) -> LpOutcome {
        let n = self.n_struct;
        let m = self.m;
        let max_iter = 50_000 + 200 * (self.cols + m);

        // Phase one: minimize the sum of artificials.
        let mut phase_one = vec![0.0; self.cols];
        for c in &mut phase_one[n + m..] {
            *c = 1.0;
        }
        self.set_reduced_costs(&phase_one);
        match self.iterate(max_iter) {
            IterResult::Optimal => {}
            IterResult::Unbounded => return LpOutcome::Stalled,
            IterResult::Stalled => return LpOutcome::Stalled,
        }
        let infeasibility = self.objective(&phase_one);
        let scale = 1.0 + lp.rows.iter().map(|r| r.rhs.abs()).fold(0.0, f64::max);
        if infeasibility > 1e-7 * scale {
            return LpOutcome::Infeasible;
        }
        // Freeze artificials at zero.
        for j in n + m..self.cols {
            self.upper[j] = 0.0;
            if self.status[j] == Status::AtUpper {
                self.status[j] = Status::AtLower;
            }
        }

        let mut cost = vec![0.0; self.cols];
        cost[..n].copy_from_slice(&lp.cost);
        self.set_reduced_costs(&cost);
        match self.iterate(max_iter) {
            IterResult::Optimal => {}
            IterResult::Unbounded => return LpOutcome::Unbounded,
            IterResult::Stalled => return LpOutcome::Stalled,
        }
        let mut x = vec![0.0; n];
        for (j, xj) in x.iter_mut().enumerate() {
            *xj = self.value(j).clamp(self.lower[j], self.upper[j]);
        }
        let objective = x.iter().zip(&lp.cost).map(|(a, c)| a * c).sum();
        LpOutcome::Optimal { x, objective }
    }

    fn iterate(&mut self, max_iter: usize) -> IterResult {
        let mut degenerate = 0usize;
        for _ in 0..max_iter {
            let bland = degenerate >= DEGENERATE_RUN;
            let Some(entering) = self.choose_entering(bland) else {
                return IterResult::Optimal;
            };
            match self.step(entering, bland) {
                Step::Unbounded => return IterResult::Unbounded,
                Step::Moved(theta) => {
                    if theta <= FEAS_TOL {
                        degenerate += 1;
                    } else {
                        degenerate = 0;
                    }
                }
            }
        }
        IterResult::Stalled
    }

    fn choose_entering(&self, bland: bool) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for j in 0..self.cols {
            if self.lower[j] == self.upper[j] {
                continue;
            }
            let gain = match self.status[j] {
                Status::Basic => continue,
                Status::AtLower if self.d[j] < -OPT_TOL => -self.d[j],
                Status::AtUpper if self.d[j] > OPT_TOL => self.d[j],
                _ => continue,
            };
            if bland {
                return Some(j);
            }
            if best.map_or(true, |(_, g)| gain > g) {
                best = Some((j, gain));
            }
        }
        best.map(|(j, _)| j)
    }

    fn step(&mut self, q: usize, bland: bool) -> Step {
        let dir = if self.status[q] == Status::AtLower {
            1.0
        } else {
            -1.0
        };
        let cols = self.cols;
        // Ratio test. Basic values move as xb -= dir * theta * alpha.
        let flip = self.upper[q] - self.lower[q];
        // (row, leaves at upper, step limit, |pivot|)
        let mut best: Option<(usize, bool, f64, f64)> = None;
        for r in 0..self.m {
            let alpha = self.t[r * cols + q] * dir;
            if alpha.abs() <= PIVOT_TOL {
                continue;
            }
            let b = self.basis[r];
            let (limit, to_upper) = if alpha > 0.0 {
                if self.lower[b] == f64::NEG_INFINITY {
                    continue;
                }
                (((self.xb[r] - self.lower[b]) / alpha).max(0.0), false)
            } else {
                if self.upper[b] == f64::INFINITY {
                    continue;
                }
                (((self.upper[b] - self.xb[r]) / -alpha).max(0.0), true)
            };
            let cand = (r, to_upper, limit, alpha.abs());
            best = match best {
                None => Some(cand),
                Some(cur) if limit < cur.2 - FEAS_TOL => Some(cand),
                Some(cur) if limit <= cur.2 + FEAS_TOL => {
                    let prefer = if bland {
                        b < self.basis[cur.0]
                    } else {
                        alpha.abs() > cur.3
                    };
                    if prefer {
                        Some((r, to_upper, limit.min(cur.2), alpha.abs()))
                    } else {
                        Some((cur.0, cur.1, limit.min(cur.2), cur.3))
                    }
                }
                keep => keep,
            };
        }
        let (theta, leave) = match best {
            Some((r, to_upper, limit, _)) if limit < flip => (limit, Some((r, to_upper))),
            _ => (flip, None),
        };
        if theta.is_infinite() {
            return Step::Unbounded;
        }
        for r in 0..self.m {
            let a = self.t[r * cols + q];
            if a != 0.0 {
                self.xb[r] -= dir * theta * a;
            }
        }
        match leave {
            None => {
                // Bound flip of the entering variable.
                self.status[q] = if dir > 0.0 {
                    Status::AtUpper
                } else {
                    Status::AtLower
                };
            }
            Some((r, to_upper)) => {
                let old = self.basis[r];
                let entering_value = if dir > 0.0 {
                    self.lower[q] + theta
                } else {
                    self.upper[q] - theta
                };
                self.pivot(r, q);
                self.status[old] = if to_upper {
                    Status::AtUpper
                } else {
                    Status::AtLower
                };
                self.basis[r] = q;
                self.status[q] = Status::Basic;
                self.xb[r] = entering_value;
            }
        }
        Step::Moved(theta)
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let cols = self.cols;
        let p = self.t[r * cols + q];
        for v in &mut self.t[r * cols..(r + 1) * cols] {
            *v /= p;
        }
        let (before, rest) = self.t.split_at_mut(r * cols);
        let (prow, after) = rest.split_at_mut(cols);
        for row in before.chunks_exact_mut(cols).chain(after.chunks_exact_mut(cols)) {
            let f = row[q];
            if f != 0.0 {
                for (v, &pv) in row.iter_mut().zip(prow.iter()) {
                    *v -= f * pv;
                }
                row[q] = 0.0;
            }
        }
        let f = self.d[q];
        if f != 0.0 {
            for (dj, &pv) in self.d.iter_mut().zip(prow.iter()) {
                *dj -= f * pv;
            }
            self.d[q] = 0.0;
        }
    }
}

enum IterResult {
    Optimal,
    Unbounded,
    Stalled,
}

enum Step {
    Moved(f64),
    Unbounded,
}
