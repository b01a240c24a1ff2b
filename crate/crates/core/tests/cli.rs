use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_berge-spectral");

fn run(args: &[&str], cwd: &Path) -> Output {
    Command::new(BIN).args(args).current_dir(cwd).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn lambda_of_a_single_edge_and_a_star() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("edge.uhg"), "3 3 1\n0 1 2\n").unwrap();
    let out = run(&["lambda", "edge.uhg", "--p", "3"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!((json(&out)["lambda"].as_f64().unwrap() - 1.0).abs() < 1e-9);

    let star = run(&["construct", "star", "10", "--uhg"], dir.path());
    assert_eq!(star.status.code(), Some(0));
    fs::write(dir.path().join("star10.uhg"), &star.stdout).unwrap();
    let out = run(&["lambda", "star10.uhg", "--p", "2", "--json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["lambda"].as_f64().unwrap() - 3.0).abs() < 1e-9);
    assert_eq!(v["converged"], Value::Bool(true));
    assert_eq!(v["witness"].as_array().unwrap().len(), 10);
}

#[test]
fn plain_graph_files_are_read_as_rank_two() {
    let dir = tempfile::tempdir().unwrap();
    let g = run(&["construct", "cycle", "5"], dir.path());
    fs::write(dir.path().join("c5.g"), &g.stdout).unwrap();
    let out = run(&["lambda", "c5.g", "--p", "2"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!((json(&out)["lambda"].as_f64().unwrap() - 2.0).abs() < 1e-9);
}

#[test]
fn malformed_or_missing_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.uhg"), "3 3 1\n0 1\n").unwrap();
    assert_eq!(run(&["lambda", "bad.uhg", "--p", "2"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["lambda", "absent.uhg", "--p", "2"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["lambda", "bad.uhg"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"], dir.path()).status.code(), Some(2));
    fs::write(dir.path().join("edge.uhg"), "3 3 1\n0 1 2\n").unwrap();
    assert_eq!(run(&["lambda", "edge.uhg", "--p", "0.5"], dir.path()).status.code(), Some(2));
}

#[test]
fn non_convergence_exits_three_with_json() {
    let dir = tempfile::tempdir().unwrap();
    let g = run(&["construct", "path", "7", "--suspend", "1"], dir.path());
    fs::write(dir.path().join("h.uhg"), &g.stdout).unwrap();
    // no float residual reaches 1e-30
    let out =
        run(&["lambda", "h.uhg", "--p", "3", "--tol", "1e-30", "--restarts", "2", "--max-iters", "50"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["converged"], Value::Bool(false));
}

#[test]
fn enumerate_counts_guards_and_golden_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["enumerate", "--family", "path", "--k", "2", "--out", "cat"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["count"], 1);
    assert!(dir.path().join("cat").is_dir());

    let out = run(&["enumerate", "--family", "star", "--k", "30"], dir.path());
    assert_eq!(out.status.code(), Some(4));

    let out = run(&["enumerate", "--family", "path", "--k", "6", "--update-golden"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let golden: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("golden/counts.json")).unwrap()).unwrap();
    assert_eq!(golden["path-6-r3-extra1"], 124);

    fs::write(dir.path().join("golden/counts.json"), r#"{"path-6-r3-extra1": 123}"#).unwrap();
    let out = run(&["enumerate", "--family", "path", "--k", "6"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["golden_match"], Value::Bool(false));
}

#[test]
fn checked_in_golden_counts_hold() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    let golden: Value = serde_json::from_str(&fs::read_to_string(root.join("golden/counts.json")).unwrap()).unwrap();
    assert_eq!(golden["path-6-r3-extra1"], 124);
    for (family, k) in [("path", "3"), ("path", "6"), ("cycle", "6"), ("star", "6")] {
        let out = run(&["enumerate", "--family", family, "--k", k, "--json"], &root);
        assert_eq!(out.status.code(), Some(0), "{family} {k}");
        assert_eq!(json(&out)["golden_match"], Value::Bool(true));
    }
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["verify", "path", "--k", "6", "--p", "3"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["outcome"], "pass");
    assert_eq!(v["mode"], "exhaustive");

    let out = run(&["verify", "star", "--k", "10", "--p", "2", "--samples", "200"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["scenario"], "star");

    assert_eq!(run(&["verify", "nonsense"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["verify", "path", "--k", "12", "--p", "3"], dir.path()).status.code(), Some(4));
}

#[test]
fn verify_exits_one_on_a_failed_claim() {
    // the true margin is about 0.05, so demanding ties above 1 must fail
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["verify", "path", "--k", "6", "--p", "3", "--tie-eps", "1"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["outcome"], "fail");
}

#[test]
fn reports_do_not_depend_on_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let args = |jobs: &'static str| {
        ["verify", "suspension", "--samples", "12", "--p-grid", "1,2,3", "--no-timing", "--json", "--jobs", jobs]
    };
    let one = run(&args("1"), dir.path());
    let eight = run(&args("8"), dir.path());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, eight.stdout);
}

#[test]
fn scenarios_are_listed() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["scenarios"], dir.path());
    let names: Vec<String> =
        json(&out).as_array().unwrap().iter().map(|s| s["name"].as_str().unwrap().to_string()).collect();
    for want in
        ["path", "cycle", "star", "suspension", "monotonicity", "move-edges", "merge", "path-exchange", "expansion"]
    {
        assert!(names.iter().any(|n| n == want), "{want} missing");
    }
}
