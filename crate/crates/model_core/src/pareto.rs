use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::model::{ObjectiveVector, Solution};

/// Vectors closer than this (relative) are treated as the same front point.
pub const DEDUP_TOL: f64 = 1e-9;

/// `a` dominates `b` when it is no worse in every objective and strictly
/// better in at least one. All objectives are minimized.
pub fn dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> bool {
    let (a, b) = (a.as_array(), b.as_array());
    a.iter().zip(&b).all(|(x, y)| x <= y) && a.iter().zip(&b).any(|(x, y)| x < y)
}

/// `a` is no worse than `b` in every objective, up to a relative `tol`.
pub fn weakly_dominates_within(a: &ObjectiveVector, b: &ObjectiveVector, tol: f64) -> bool {
    let (a, b) = (a.as_array(), b.as_array());
    a.iter()
        .zip(&b)
        .all(|(x, y)| *x <= *y + tol * (1.0 + x.abs().max(y.abs())))
}

/// Lexicographic `(f1, f2, f3)` order using `total_cmp`.
pub fn lex_cmp(a: &ObjectiveVector, b: &ObjectiveVector) -> Ordering {
    a.f1.total_cmp(&b.f1)
        .then(a.f2.total_cmp(&b.f2))
        .then(a.f3.total_cmp(&b.f3))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontPoint {
    pub objectives: ObjectiveVector,
    pub solution: Solution,
}

/// Mutually non-dominated points, sorted lexicographically by objectives.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ParetoFront {
    pub points: Vec<FrontPoint>,
}

impl ParetoFront {
    /// Filters dominated candidates, merges near-equal vectors and sorts.
    /// Differences below [`DEDUP_TOL`] are treated as rounding noise.
    pub fn from_candidates(candidates: impl IntoIterator<Item = FrontPoint>) -> Self {
        let mut all: Vec<FrontPoint> = candidates.into_iter().collect();
        all.sort_by(|a, b| lex_cmp(&a.objectives, &b.objectives));
        let mut kept: Vec<FrontPoint> = Vec::new();
        for p in all {
            // In lexicographic order only earlier points can dominate later ones.
            let redundant = kept
                .iter()
                .any(|q| weakly_dominates_within(&q.objectives, &p.objectives, DEDUP_TOL));
            if !redundant {
                kept.push(p);
            }
        }
        Self { points: kept }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn objectives(&self) -> Vec<ObjectiveVector> {
        self.points.iter().map(|p| p.objectives).collect()
    }
}
