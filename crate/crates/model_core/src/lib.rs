//! Relief location-distribution model: instances, solutions, objectives,
//! feasibility, Pareto fronts and a small LP solver.

pub mod error;
pub mod fixtures;
pub mod lp;
pub mod model;
pub mod pareto;

pub use error::{Error, Result};
