//! Instance and front files.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use model_core::model::{InstanceFile, ObjectiveVector, ProblemInstance};
use model_core::pareto::ParetoFront;
use robust::{build_crisp_instance, FuzzyFile};

/// Reads a crisp instance, or a fuzzy one turned crisp at its weights.
pub fn load_instance(path: &Path) -> Result<ProblemInstance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if value.get("fuzzy").and_then(|v| v.as_bool()) == Some(true) {
        let file = FuzzyFile::from_json(&text)?;
        let (crisp, _) = build_crisp_instance(&file.instance, &file.weights)?;
        return Ok(crisp);
    }
    Ok(InstanceFile::from_json(&text)?.instance)
}

pub fn save_instance(path: &Path, inst: &ProblemInstance, seed: Option<u64>) -> Result<()> {
    let text = InstanceFile::new(inst.clone(), seed).to_json()?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontRecord {
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
    pub open: Vec<usize>,
    pub note: String,
}

pub fn front_records(front: &ParetoFront, note: &str) -> Vec<FrontRecord> {
    front
        .points
        .iter()
        .map(|p| FrontRecord {
            f1: p.objectives.f1,
            f2: p.objectives.f2,
            f3: p.objectives.f3,
            open: (0..p.solution.open.len())
                .filter(|&j| p.solution.open[j])
                .collect(),
            note: note.to_string(),
        })
        .collect()
}

pub fn write_front_json(path: &Path, records: &[FrontRecord]) -> Result<()> {
    let text = serde_json::to_string_pretty(records)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

pub fn write_front_csv(path: &Path, points: &[ObjectiveVector]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    w.write_record(["f1", "f2", "f3"])?;
    for p in points {
        w.write_record([p.f1.to_string(), p.f2.to_string(), p.f3.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
