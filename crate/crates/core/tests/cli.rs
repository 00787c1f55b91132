use std::path::Path;
use std::process::{Command, Output};

use fixrank::experiment::{run_experiment, ExperimentConfig, OutputFormat, RunRecord};

fn fixrank(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fixrank"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn fixrank")
}

#[test]
fn unknown_flag_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = fixrank(&["run", "--no-such-flag"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn bad_config_and_params_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.cfg"), "m = 10\nwhat = 3\n").unwrap();
    let out = fixrank(&["run", "--config", "bad.cfg"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    let out = fixrank(&["run", "--params", "1,1,-1,1,1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = fixrank(&["run", "--config", "missing.cfg"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn example_config_writes_declared_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = fixrank(&["run", "--config", "example"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("example-run.json")).unwrap();
    let record: RunRecord = serde_json::from_str(&text).unwrap();
    assert!(record.relative_gap.unwrap().abs() <= 1e-8);
    assert_eq!(record.problem.seed, 7);
}

#[test]
fn csv_trace_has_fixed_header() {
    let dir = tempfile::tempdir().unwrap();
    let out = fixrank(&["run", "--csv", "--field", "complex", "--seed", "2"], dir.path());
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let mut lines = stdout.lines();
    assert_eq!(lines.next(), Some("iter,cost,gnorm,step,elapsed_ms"));
    let rows: Vec<&str> = lines.collect();
    assert!(rows.len() > 1);
    assert!(rows.iter().all(|r| r.split(',').count() == 5));
}

#[test]
fn json_and_csv_flags_conflict() {
    let dir = tempfile::tempdir().unwrap();
    let out = fixrank(&["run", "--json", "--csv"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_sweeps_every_weight() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("small.cfg"), "m = 8\nn = 6\np = 2\nmax_iter = 200\n").unwrap();
    let out = fixrank(&["bench", "--config", "small.cfg", "--out", "table.txt"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = std::fs::read_to_string(dir.path().join("table.txt")).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines.len(), 26);
    assert!(lines[0].starts_with("param"));
    for name in ["alpha0", "alpha1", "beta", "gamma0", "gamma1"] {
        assert_eq!(lines.iter().filter(|l| l.starts_with(name)).count(), 5);
    }
}

#[test]
fn echoed_spec_reproduces_final_cost() {
    let dir = tempfile::tempdir().unwrap();
    let out = fixrank(&["run", "--seed", "5", "--field", "complex", "--out", "r.json"], dir.path());
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("r.json")).unwrap();
    let record: RunRecord = serde_json::from_str(&text).unwrap();
    let cfg = ExperimentConfig {
        problem: record.problem.clone(),
        solver: record.solver.clone(),
        out: None,
        format: OutputFormat::Json,
    };
    let again = run_experiment(&cfg).unwrap();
    assert!((again.final_cost - record.final_cost).abs() <= 1e-12 * record.final_cost.abs().max(1.0));
    assert_eq!(again.without_timing(), record.without_timing());
}
