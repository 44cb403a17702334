//! End-to-end checks of the command-line interface: file formats, exit
//! codes, and round-tripping solutions back through the library.

use std::process::{Command, Output};
use stochpack::costs::{partition_cost, CostModel};
use stochpack::model::{Instance, Partition};
use stochpack::solver::SolutionRecord;

fn stochpack(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stochpack"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_instance(dir: &tempfile::TempDir, name: &str, json: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, json).unwrap();
    path.to_string_lossy().into_owned()
}

const TWO_BIN: &str = r#"{
  "capacities": [260.0, 340.0],
  "services": [
    {"mu": 120.0, "var": 900.0},
    {"mu": 80.0, "var": 6400.0},
    {"mu": 150.0, "var": 2500.0},
    {"mu": 90.0, "var": 8100.0},
    {"mu": 60.0, "var": 100.0}
  ]
}"#;

#[test]
fn solve_two_bins_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_instance(&dir, "inst.json", TWO_BIN);
    let out = stochpack(&["solve", &path, "--model", "SPMED"]);
    assert!(out.status.success());
    let record: SolutionRecord = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(record.cut_points.len(), 1);
    assert_eq!(record.model, CostModel::Spmed);
    assert!(record.certificate.is_some());
    // the reported cost matches re-evaluating the partition
    let instance: Instance = serde_json::from_str(TWO_BIN).unwrap();
    let cost = partition_cost(
        &instance,
        &Partition::new(record.assignment.clone()),
        CostModel::Spmed,
    )
    .unwrap();
    assert!((cost - record.cost).abs() < 1e-12);
}

#[test]
fn solve_four_bins_has_three_cuts() {
    let dir = tempfile::tempdir().unwrap();
    let json = r#"{
      "capacities": [100.0, 120.0, 140.0, 160.0],
      "services": [
        {"mu": 60.0, "var": 400.0}, {"mu": 70.0, "var": 4900.0},
        {"mu": 50.0, "var": 100.0}, {"mu": 80.0, "var": 1600.0},
        {"mu": 90.0, "var": 8100.0}, {"mu": 40.0, "var": 3200.0}
      ]
    }"#;
    let path = write_instance(&dir, "inst.json", json);
    let outfile = dir.path().join("sol.json");
    let out = stochpack(&["solve", &path, "--model", "SPMOP", "--out", outfile.to_str().unwrap()]);
    assert!(out.status.success());
    let record: SolutionRecord =
        serde_json::from_str(&std::fs::read_to_string(outfile).unwrap()).unwrap();
    assert_eq!(record.cut_points.len(), 3);
    assert!(record.certificate.is_none());
}

#[test]
fn solve_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // parse error -> 2
    let bad = write_instance(&dir, "bad.json", r#"{"capacities": [1.0], "oops": true}"#);
    assert_eq!(stochpack(&["solve", &bad]).status.code(), Some(2));
    // infeasible -> 3
    let infeasible = write_instance(
        &dir,
        "infeasible.json",
        r#"{"capacities": [10.0, 10.0], "services": [{"mu": 100.0, "var": 1.0}]}"#,
    );
    assert_eq!(stochpack(&["solve", &infeasible]).status.code(), Some(3));
    // unknown flag -> 2 (clap usage error)
    assert_eq!(stochpack(&["solve", "--nope"]).status.code(), Some(2));
}

#[test]
fn verify_passes_and_honors_zero_trials() {
    let out = stochpack(&["verify", "--trials", "4", "--n-max", "7", "--seed", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert!(text.lines().all(|l| l.starts_with("PASS ")));

    let empty = stochpack(&["verify", "--trials", "0"]);
    assert!(empty.status.success());
    assert!(empty.stdout.is_empty());
}

#[test]
fn simulate_writes_csv_and_rejects_bad_grid() {
    let dir = tempfile::tempdir().unwrap();
    let outfile = dir.path().join("sweep.csv");
    let out = stochpack(&[
        "simulate", "--n", "8", "--reps", "2", "--timeslots", "40", "--grid", "1.2,1.4",
        "--seed", "3", "--out", outfile.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(outfile).unwrap();
    assert!(csv.starts_with("c_over_mu,model,algo,mean_cost,repetitions\n"));
    assert_eq!(csv.lines().count(), 1 + 3 * 2 * 2);

    let bad = stochpack(&["simulate", "--n", "8", "--grid", "0.8"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn grid_exports_and_flags_infeasible() {
    let out = stochpack(&[
        "grid", "--c1", "100", "--c2", "100", "--mu", "160", "--var", "6400",
        "--resolution", "2",
    ]);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.starts_with("a,b,cost,tag\n"));
    // resolution 2: four grid corners + saddle (no interior valley rows)
    assert_eq!(csv.lines().count(), 1 + 4 + 1);

    let infeasible = stochpack(&[
        "grid", "--c1", "10", "--c2", "10", "--mu", "160", "--var", "6400",
    ]);
    assert_eq!(infeasible.status.code(), Some(3));

    let bad = stochpack(&[
        "grid", "--c1", "100", "--c2", "100", "--mu", "160", "--var", "6400",
        "--resolution", "1",
    ]);
    assert_eq!(bad.status.code(), Some(2));
}
