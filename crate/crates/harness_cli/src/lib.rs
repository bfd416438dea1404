//! Experiment harness: benchmark sweeps, Taguchi tuning and reports.

pub mod bench;
pub mod io;
pub mod report;
pub mod taguchi;

pub use bench::{run_benchmark, Algorithm, BenchResult, BenchRow, BenchmarkPlan, InstanceSource, RowStatus};
pub use taguchi::{taguchi_tune, tune_with, DesignKind, Factor, TaguchiDesign, TuningResult};
