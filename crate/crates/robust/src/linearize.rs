//! Exact linearization of products with a binary factor.

use serde::{Deserialize, Serialize};

use model_core::error::{Error, Result};
use model_core::lp::RowKind;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum VarKind {
    Binary,
    Continuous { lower: f64, upper: f64 },
}

impl VarKind {
    fn bounds(self) -> (f64, f64) {
        match self {
            VarKind::Binary => (0.0, 1.0),
            VarKind::Continuous { lower, upper } => (lower, upper),
        }
    }
}

/// Variables plus the products `x_a · x_b` that appear in the model.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BilinearModel {
    pub vars: Vec<VarKind>,
    pub products: Vec<(usize, usize)>,
}

impl BilinearModel {
    pub fn add_var(&mut self, kind: VarKind) -> usize {
        self.vars.push(kind);
        self.vars.len() - 1
    }

    pub fn add_product(&mut self, a: usize, b: usize) -> usize {
        self.products.push((a, b));
        self.products.len() - 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearConstraint {
    pub coeffs: Vec<(usize, f64)>,
    #[serde(with = "row_kind")]
    pub kind: RowKind,
    pub rhs: f64,
}

mod row_kind {
    use serde::{Deserialize, Deserializer, Serializer};

    use model_core::lp::RowKind;

    pub fn serialize<S: Serializer>(k: &RowKind, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(match k {
            RowKind::Le => "le",
            RowKind::Ge => "ge",
            RowKind::Eq => "eq",
        })
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<RowKind, D::Error> {
        match String::deserialize(d)?.as_str() {
            "le" => Ok(RowKind::Le),
            "ge" => Ok(RowKind::Ge),
            "eq" => Ok(RowKind::Eq),
            other => Err(serde::de::Error::custom(format!("unknown row kind {other}"))),
        }
    }
}

/// The original variables, one auxiliary per product, and the envelope rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearizedModel {
    pub vars: Vec<VarKind>,
    pub constraints: Vec<LinearConstraint>,
    /// Auxiliary variable of each product, in product order.
    pub product_vars: Vec<usize>,
}

/// Replaces each product `z · x` (`z` binary, `x` in `[L, U]`) by `v` with
///
/// ```text
/// v ≤ U·z        v ≥ L·z
/// v ≤ x − L(1−z)  v ≥ x − U(1−z)
/// ```
///
/// which forces `v = x·z` for `z ∈ {0, 1}`.
pub fn linearize_products(model: &BilinearModel) -> Result<LinearizedModel> {
    let mut vars = model.vars.clone();
    let mut constraints = Vec::new();
    let mut product_vars = Vec::new();
    for &(a, b) in &model.products {
        let (ka, kb) = match (model.vars.get(a), model.vars.get(b)) {
            (Some(ka), Some(kb)) => (*ka, *kb),
            _ => return Err(Error::Shape(format!("product ({a}, {b}) names a missing variable"))),
        };
        let (z, x) = match (ka, kb) {
            (VarKind::Binary, _) => (a, b),
            (_, VarKind::Binary) => (b, a),
            _ => {
                return Err(Error::NotLinearizable(format!(
                    "product of continuous variables {a} and {b}"
                )))
            }
        };
        let (lo, hi) = vars[x].bounds();
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(Error::NotLinearizable(format!("variable {x} needs finite bounds")));
        }
        let v = vars.len();
        vars.push(VarKind::Continuous {
            lower: lo.min(0.0),
            upper: hi.max(0.0),
        });
        product_vars.push(v);
        let row = |coeffs: Vec<(usize, f64)>, kind, rhs| LinearConstraint { coeffs, kind, rhs };
        constraints.push(row(vec![(v, 1.0), (z, -hi)], RowKind::Le, 0.0));
        constraints.push(row(vec![(v, 1.0), (z, -lo)], RowKind::Ge, 0.0));
        constraints.push(row(vec![(v, 1.0), (x, -1.0), (z, -lo)], RowKind::Le, -lo));
        constraints.push(row(vec![(v, 1.0), (x, -1.0), (z, -hi)], RowKind::Ge, -hi));
    }
    Ok(LinearizedModel {
        vars,
        constraints,
        product_vars,
    })
}

/// Range of the auxiliary of `product` allowed by its bounds and every
/// constraint, with the original variables fixed to `values`. `None` when
/// the range is empty.
pub fn feasible_interval(
    lin: &LinearizedModel,
    product: usize,
    values: &[f64],
) -> Result<Option<(f64, f64)>> {
    let v = *lin
        .product_vars
        .get(product)
        .ok_or_else(|| Error::Shape(format!("no product {product}")))?;
    let original = lin.vars.len() - lin.product_vars.len();
    if values.len() != original {
        return Err(Error::Shape(format!(
            "expected {original} values, got {}",
            values.len()
        )));
    }
    let (mut lo, mut hi) = lin.vars[v].bounds();
    for c in &lin.constraints {
        let Some(&(_, a)) = c.coeffs.iter().find(|(i, _)| *i == v) else {
            continue;
        };
        let mut rest = 0.0;
        for &(i, coef) in c.coeffs.iter().filter(|(i, _)| *i != v) {
            match values.get(i) {
                Some(x) => rest += coef * x,
                None => {
                    return Err(Error::Shape(format!(
                        "constraint couples auxiliary variables {v} and {i}"
                    )))
                }
            }
        }
        let bound = (c.rhs - rest) / a;
        let upper = matches!((c.kind, a > 0.0), (RowKind::Le, true) | (RowKind::Ge, false));
        match c.kind {
            RowKind::Eq => {
                lo = lo.max(bound);
                hi = hi.min(bound);
            }
            _ if upper => hi = hi.min(bound),
            _ => lo = lo.max(bound),
        }
    }
    Ok((lo <= hi + 1e-12).then_some((lo, hi)))
}
