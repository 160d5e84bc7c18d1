//! End-to-end checks of the command surface: in-process dispatch for
//! payload assertions plus spawned-binary runs for exit codes.

use normone_cli::run_args;
use std::io::Write;
use std::process::Command;

fn write_temp(content: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(content.as_bytes()).unwrap();
    f
}

const TRIANGLE_MODEL: &str = r#"{"components": ["X1", "X2", "X3"],
    "points": [{"name": "P1", "on": ["X2", "X3"]},
               {"name": "P2", "on": ["X1", "X3"]},
               {"name": "P3", "on": ["X1", "X2"]}]}"#;

const CHAIN_MODEL: &str =
    r#"{"components": ["X1", "X2"], "points": [{"name": "P1", "on": ["X1", "X2"]}]}"#;

#[test]
fn ramify_prints_quotient() {
    let (code, report) = run_args(["normone", "ramify", "--e", "6", "--ell", "3"]);
    assert_eq!(code, 0);
    assert_eq!(report.payload["result"], 2);
    assert_eq!(report.text, "2");
}

#[test]
fn verify_triangle_cases() {
    let (code, report) = run_args([
        "normone",
        "verify-paper",
        "triangle",
        "--n",
        "2",
        "--q",
        "5",
    ]);
    assert_eq!(code, 0);
    assert_eq!(report.payload["sha"]["feasible"], false);
    assert_eq!(report.payload["sha"]["invariant_factors"][0], 2);

    let (code, _) = run_args([
        "normone",
        "verify-paper",
        "triangle",
        "--n",
        "3",
        "--q",
        "19",
    ]);
    assert_eq!(code, 0);

    // 7 != 1 mod 4
    let (code, report) = run_args([
        "normone",
        "verify-paper",
        "triangle",
        "--n",
        "2",
        "--q",
        "7",
    ]);
    assert_eq!(code, 1);
    assert_eq!(report.status, "error");
}

#[test]
fn verify_multinorm_cases() {
    let (code, report) = run_args([
        "normone",
        "verify-paper",
        "multinorm",
        "--n",
        "2",
        "--q",
        "5",
    ]);
    assert_eq!(code, 0);
    assert_eq!(report.payload["rho_image_exponent"], 2);

    let (code, _) = run_args([
        "normone",
        "verify-paper",
        "multinorm",
        "--n",
        "2",
        "--q",
        "3",
    ]);
    assert_eq!(code, 1);
}

#[test]
fn sha_on_tree_with_target_is_feasible() {
    let model = write_temp(CHAIN_MODEL);
    let target = write_temp(r#"{"edges": {"P1:X1": 1, "P1:X2": 2}}"#);
    let (code, report) = run_args([
        "normone",
        "sha",
        model.path().to_str().unwrap(),
        "--n",
        "3",
        "--target",
        target.path().to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(report.payload["feasible"], true);
    let witness = report.payload["witness"].as_object().unwrap();
    let p1 = witness["P1"].as_u64().unwrap();
    let x1 = witness["X1"].as_u64().unwrap();
    let x2 = witness["X2"].as_u64().unwrap();
    assert_eq!((p1 + x1) % 3, 1);
    assert_eq!((p1 + x2) % 3, 2);
}

#[test]
fn sha_on_triangle_reports_invariants() {
    let model = write_temp(TRIANGLE_MODEL);
    let (code, report) = run_args(["normone", "sha", model.path().to_str().unwrap(), "--n", "4"]);
    assert_eq!(code, 0);
    assert_eq!(report.payload["invariant_factors"][0], 4);
}

#[test]
fn graph_check_reports_shape() {
    let model = write_temp(TRIANGLE_MODEL);
    let (code, report) = run_args(["normone", "graph-check", model.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(report.payload["is_tree"], false);
    assert_eq!(report.payload["betti_number"], 1);
}

#[test]
fn graph_factorize_symmetric() {
    let model = write_temp(CHAIN_MODEL);
    let edges = write_temp(r#"{"edges": {"P1:X1": [1, 0, 2], "P1:X2": [2, 0, 1]}}"#);
    let (code, report) = run_args([
        "normone",
        "graph-factorize",
        model.path().to_str().unwrap(),
        "--edges",
        edges.path().to_str().unwrap(),
        "--group",
        "sym:3",
    ]);
    assert_eq!(code, 0);
    assert!(report.payload["assignment"]["P1"].is_array());
}

#[test]
fn malformed_json_is_a_parse_error() {
    let model = write_temp("{ not json");
    let (code, report) = run_args(["normone", "graph-check", model.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(report.status, "error");
}

#[test]
fn report_json_round_trips() {
    let (_, report) = run_args([
        "normone",
        "--json",
        "verify-paper",
        "triangle",
        "--n",
        "2",
        "--q",
        "5",
    ]);
    let value = serde_json::to_value(&report).unwrap();
    let serialized = serde_json::to_string_pretty(&value).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&serialized).unwrap();
    let reserialized = serde_json::to_string_pretty(&parsed).unwrap();
    assert_eq!(serialized, reserialized);
}

#[test]
fn spawned_binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_normone");
    let ok = Command::new(bin)
        .args(["ramify", "--e", "5", "--ell", "3"])
        .output()
        .unwrap();
    assert!(ok.status.success());
    assert_eq!(String::from_utf8_lossy(&ok.stdout).trim(), "5");

    let usage = Command::new(bin).args(["frobnicate"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(1));

    let mismatchless = Command::new(bin)
        .args(["verify-paper", "triangle", "--n", "2", "--q", "13"])
        .output()
        .unwrap();
    assert!(mismatchless.status.success());
}

#[test]
fn local_commands() {
    let (code, report) = run_args([
        "normone",
        "local-hensel",
        "--q",
        "5",
        "--n",
        "2",
        "--series",
        "1 + t",
        "--prec",
        "8",
    ]);
    assert_eq!(code, 0);
    assert!(report.payload["root"]
        .as_str()
        .unwrap()
        .starts_with("1 + 3*t"));

    let (code, report) = run_args([
        "normone",
        "local-norm",
        "--q",
        "5",
        "--n",
        "4",
        "--radicand",
        "2",
        "--lambda",
        "t",
    ]);
    assert_eq!(code, 0);
    assert_eq!(report.payload["is_norm"], false);

    // residue 2 is not 1: hensel precondition fails with exit 1
    let (code, _) = run_args([
        "normone",
        "local-hensel",
        "--q",
        "5",
        "--n",
        "2",
        "--series",
        "2 + t",
    ]);
    assert_eq!(code, 1);
}
