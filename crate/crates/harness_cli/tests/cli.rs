use std::fs;
use std::path::Path;
use std::process::Command;

use harness_cli::bench::{run_benchmark, BenchmarkPlan, InstanceSource, RowStatus};
use harness_cli::io::save_instance;
use harness_cli::report::{write_csv, write_svg};
use model_core::fixtures::unit_instance;
use nsga2::NsgaConfig;

fn relief(dir: &Path, args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_relief"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&out.stdout).into_owned() + &String::from_utf8_lossy(&out.stderr);
    (out.status.code().unwrap(), text)
}

fn quick_nsga() -> NsgaConfig {
    NsgaConfig {
        population: 20,
        generations: 5,
        ..NsgaConfig::default()
    }
}

#[test]
fn generate_and_solve() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(relief(d, &["generate", "--table7", "1", "-o", "i.json"]).0, 0);
    let (code, text) = relief(d, &["solve-exact", "i.json", "--grid", "3", "-o", "e.json", "--csv", "e.csv"]);
    assert_eq!(code, 0, "{text}");
    let csv = fs::read_to_string(d.join("e.csv")).unwrap();
    assert!(csv.starts_with("f1,f2,f3\n"));
    let front: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join("e.json")).unwrap()).unwrap();
    let first = &front.as_array().unwrap()[0];
    for key in ["f1", "f2", "f3", "open", "note"] {
        assert!(first.get(key).is_some(), "missing {key}");
    }
    let args = ["solve-nsga2", "i.json", "--pop", "20", "--gens", "3", "--seed", "4", "-o", "n.json", "--log", "log.jsonl"];
    assert_eq!(relief(d, &args).0, 0);
    assert_eq!(fs::read_to_string(d.join("log.jsonl")).unwrap().lines().count(), 4);
}

#[test]
fn dims_and_seed_flags() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let args = ["generate", "--dims", "2,3,4,1", "--seed", "9", "--integral", "-o", "g.json"];
    assert_eq!(relief(d, &args).0, 0);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join("g.json")).unwrap()).unwrap();
    assert_eq!(v["seed"], 9);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["dims"]["J"], 3);
}

#[test]
fn fatal_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(relief(d, &["solve-exact", "nope.json", "-o", "e.json"]).0, 1);
    assert_eq!(relief(d, &["no-such-command"]).0, 1);
    fs::write(d.join("bad.json"), "{\"instances\": [], \"time_limit_seconds\": 0}").unwrap();
    assert_eq!(relief(d, &["bench", "--plan", "bad.json"]).0, 1);
}

#[test]
fn partial_failures_exit_two_and_keep_going() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let plan = serde_json::json!({
        "instances": [{"table7": 1}, {"path": "missing.json"}],
        "time_limit_seconds": 30,
        "grid": 3,
        "nsga": quick_nsga(),
        "record_timing": false
    });
    fs::write(d.join("plan.json"), plan.to_string()).unwrap();
    let (code, text) = relief(d, &["bench", "--plan", "plan.json", "-o", "out"]);
    assert_eq!(code, 2, "{text}");
    let metrics = fs::read_to_string(d.join("out/metrics.csv")).unwrap();
    assert_eq!(metrics.lines().count(), 5);
    assert!(metrics.contains("exact,missing,-,-,-,,-,-"));
    let (code, _) = relief(d, &["report", "--input", "out/results.json", "--format", "svg", "-o", "svg"]);
    assert_eq!(code, 0);
    assert_eq!(fs::read_dir(d.join("svg")).unwrap().count(), 3);
}

#[test]
fn zero_demand_gives_equal_scores() {
    let dir = tempfile::tempdir().unwrap();
    let mut inst = unit_instance();
    inst.demand = vec![vec![0.0]];
    let path = dir.path().join("zero.json");
    save_instance(&path, &inst, None).unwrap();
    let plan = BenchmarkPlan {
        instances: vec![InstanceSource::Path(path)],
        algorithms: vec![harness_cli::Algorithm::Exact, harness_cli::Algorithm::Nsga2],
        time_limit_seconds: 10.0,
        grid: 3,
        seeds: vec![1],
        nsga: quick_nsga(),
        node_limit: None,
        record_timing: false,
        ideal: Default::default(),
    };
    let result = run_benchmark(&plan, 2).unwrap();
    assert_eq!(result.rows.len(), 2);
    let a = &result.rows[0];
    let b = &result.rows[1];
    assert_eq!(a.front, b.front);
    assert_eq!(a.front.len(), 1);
    assert_eq!(a.report.unwrap().saw, b.report.unwrap().saw);
}

#[test]
fn empty_results_write_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let files = write_csv(&Default::default(), dir.path()).unwrap();
    let text = fs::read_to_string(&files[0]).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(write_svg(&Default::default(), dir.path()).unwrap().is_empty());
}

#[test]
fn timed_out_rows_are_marked() {
    let plan = BenchmarkPlan {
        instances: vec![InstanceSource::Table7(3)],
        algorithms: vec![harness_cli::Algorithm::Exact],
        time_limit_seconds: 0.2,
        grid: 10,
        seeds: vec![1],
        nsga: quick_nsga(),
        node_limit: None,
        record_timing: true,
        ideal: Default::default(),
    };
    let result = run_benchmark(&plan, 1).unwrap();
    assert_eq!(result.rows[0].status, RowStatus::TimedOut);
    assert!(!result.has_failures());
    assert!(result.rows[0].report.is_none());
}
