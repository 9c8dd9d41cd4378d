//! End-to-end checks of the command-line interface: reported numbers,
//! byte-level determinism, file outputs and exit codes.

use std::process::Command;

fn brease() -> Command {
    Command::new(env!("CARGO_BIN_EXE_brease"))
}

fn run_json(args: &[&str]) -> serde_json::Value {
    let out = brease().args(args).output().expect("run brease");
    assert!(
        out.status.success(),
        "brease {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn analyze_reports_aspirin_risk_ratio() {
    let dir = tempfile::tempdir().unwrap();
    let report = run_json(&[
        "analyze",
        "--y0", "26", "--n0", "11034", "--y1", "10", "--n1", "11037",
        "--prior", "default:0.3",
        "--seed", "7",
        "--draws", "100000",
        "--out", dir.path().to_str().unwrap(),
    ]);
    let rr = report["summaries"]
        .as_array()
        .unwrap()
        .iter()
        .find(|s| s["estimand"] == "risk_ratio")
        .expect("risk ratio summary");
    let median = rr["median"].as_f64().unwrap();
    assert!((median - 0.44).abs() <= 0.01, "median {median}");
    assert!(dir.path().join("inline_draws.csv").exists());
    assert!(dir.path().join("inline_draws_meta.json").exists());
    assert!(dir.path().join("report.json").exists());
}

#[test]
fn identical_seeds_give_byte_identical_draws() {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    for dir in [&d1, &d2] {
        let out = brease()
            .args([
                "analyze",
                "--y0", "3", "--n0", "12", "--y1", "5", "--n1", "14",
                "--seed", "99",
                "--draws", "2000",
                "--out", dir.path().to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    let a = std::fs::read(d1.path().join("inline_draws.csv")).unwrap();
    let b = std::fs::read(d2.path().join("inline_draws.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn exit_codes_follow_the_contract() {
    // argument error (prior mean out of range)
    let out = brease()
        .args(["analyze", "--y0", "1", "--n0", "2", "--y1", "1", "--n1", "2",
               "--prior", "default:1.5", "--seed", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // data validation error
    let out = brease()
        .args(["analyze", "--y0", "5", "--n0", "2", "--y1", "1", "--n1", "2",
               "--seed", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    // clap-level argument error
    let out = brease().args(["analyze", "--bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    // missing seed on a sampling command
    let out = brease()
        .args(["analyze", "--y0", "1", "--n0", "2", "--y1", "1", "--n1", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bf_matches_reported_comparators() {
    let report = run_json(&[
        "bf",
        "--y0", "26", "--n0", "11034", "--y1", "10", "--n1", "11037",
        "--comparator", "ib", "--a", "1",
    ]);
    let bf01 = report["bf01"].as_f64().unwrap();
    assert!((bf01 - 20.27).abs() <= 0.03, "IB BF01 {bf01}");

    let report = run_json(&[
        "bf",
        "--y0", "26", "--n0", "11034", "--y1", "10", "--n1", "11037",
    ]);
    let bf10 = report["bf10"].as_f64().unwrap();
    assert!((bf10 - 1.2).abs() <= 0.05, "BF10 {bf10}");
}

#[test]
fn degenerate_grid_equals_bf() {
    let dir = tempfile::tempdir().unwrap();
    let grid = run_json(&[
        "sensitivity",
        "--y0", "3", "--n0", "10", "--y1", "5", "--n1", "12",
        "--prior", "default:0.3",
        "--axis1", "mue=0.3",
        "--axis2", "mus=0.3",
        "--out", dir.path().to_str().unwrap(),
    ]);
    let bf = run_json(&[
        "bf",
        "--y0", "3", "--n0", "10", "--y1", "5", "--n1", "12",
        "--prior", "default:0.3",
    ]);
    assert_eq!(grid["points"].as_u64(), Some(1));
    let gmin = grid["bf_min"].as_f64().unwrap();
    let direct = bf["bf10"].as_f64().unwrap();
    assert!((gmin - direct).abs() <= 1e-12 * direct);
    let csv = std::fs::read_to_string(dir.path().join("inline_sensitivity.csv")).unwrap();
    assert!(csv.starts_with("param1,value1,param2,value2,log_bf,bf,band\n"));
}

#[test]
fn covid_sensitivity_grid_stays_strong() {
    // a coarse sweep of the full hyperparameter square: every cell must
    // still decisively favor the effect model
    let dir = tempfile::tempdir().unwrap();
    let grid = run_json(&[
        "sensitivity",
        "--y0", "169", "--n0", "20172", "--y1", "9", "--n1", "19965",
        "--axis1", "mue=0.05:0.95:5",
        "--axis2", "mus=0.05:0.95:5",
        "--out", dir.path().to_str().unwrap(),
    ]);
    let min = grid["bf_min"].as_f64().unwrap();
    assert!(min > 10.0, "minimum BF10 over the grid is {min}");
}

#[test]
fn strata_single_stratum_matches_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("one.csv");
    std::fs::write(&csv, "stratum,y0,N0,y1,N1\nonly,26,11034,10,11037\n").unwrap();
    let strata = run_json(&[
        "strata",
        "--input", csv.to_str().unwrap(),
        "--mode", "independent",
        "--seed", "7",
        "--draws", "50000",
        "--out", dir.path().to_str().unwrap(),
    ]);
    let rr = &strata["strata"][0]["risk_ratio"];
    assert!((rr["median"].as_f64().unwrap() - 0.44).abs() <= 0.015);
    assert!(dir.path().join("strata_draws.csv").exists());
}

#[test]
fn replicate_and_oracle_marginal_run() {
    let dir = tempfile::tempdir().unwrap();
    let report = run_json(&[
        "replicate", "aspirin_phs",
        "--seed", "7",
        "--draws", "50000",
        "--out", dir.path().to_str().unwrap(),
    ]);
    assert!((report["bf01_ib_a1"].as_f64().unwrap() - 20.27).abs() < 0.03);
    assert!(dir.path().join("replicate_report.json").exists());

    let report = run_json(&[
        "oracle-marginal",
        "--y0", "2", "--n0", "14", "--y1", "4", "--n1", "16",
        "--target", "theta0",
        "--grid", "50",
        "--out", dir.path().to_str().unwrap(),
    ]);
    let csv_path = report["csv"].as_str().unwrap();
    let csv = std::fs::read_to_string(csv_path).unwrap();
    assert_eq!(csv.lines().count(), 51);
    let total: f64 = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-6, "masses sum to {total}");
}
