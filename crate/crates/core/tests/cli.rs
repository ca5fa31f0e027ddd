use std::fs;

use serde_json::Value;
use thin_squares::cli::{run_with, EXIT_NO_REPRESENTATION, EXIT_OK, EXIT_USAGE};
use thin_squares::thin_basis::{BasisDocument, ThinBasis};

fn thinsq(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_with(std::iter::once("thinsq").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(line: &str) -> Value {
    serde_json::from_str(line).expect("valid json line")
}

#[test]
fn count_r2_plain() {
    assert_eq!(thinsq(&["--format", "plain", "count", "r2", "25"]), (EXIT_OK, "12\n".into(), String::new()));
}

#[test]
fn count_json_and_hex_input() {
    let (code, out, _) = thinsq(&["count", "r4", "0xa"]);
    assert_eq!(code, EXIT_OK);
    let v = json(out.trim());
    assert_eq!(v["n"], 10);
    assert_eq!(v["value"], 144);
}

#[test]
fn three_squares_of_seven_is_no_representation() {
    let (code, out, err) = thinsq(&["decompose", "--squares", "3", "7"]);
    assert_eq!(code, EXIT_NO_REPRESENTATION);
    assert!(out.is_empty());
    assert!(err.contains("4^r(8s+7)"), "{err}");
}

#[test]
fn two_squares_of_three_is_no_representation() {
    assert_eq!(thinsq(&["decompose", "--squares", "2", "3"]).0, EXIT_NO_REPRESENTATION);
}

#[test]
fn decomposition_record_schema() {
    let (code, out, _) = thinsq(&["--seed", "7", "decompose", "--squares", "4", "1000003"]);
    assert_eq!(code, EXIT_OK);
    let v = json(out.trim());
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys.len(), 6);
    for k in ["n", "s", "k", "parts", "trials", "path"] {
        assert!(v.get(k).is_some(), "missing {k}");
    }
    let sum: u64 = v["parts"].as_array().unwrap().iter().map(|p| p.as_u64().unwrap().pow(2)).sum();
    assert_eq!(sum, 1_000_003);
    assert_eq!(v["s"], 4);
    assert_eq!(v["k"], 2);
}

#[test]
fn two_s_squares_pads() {
    let (code, out, _) = thinsq(&["decompose", "--squares", "2s", "--s", "3", "1000"]);
    assert_eq!(code, EXIT_OK);
    let v = json(out.trim());
    assert_eq!(v["s"], 6);
}

#[test]
fn same_seed_same_output() {
    let args = ["--seed", "99", "decompose", "--squares", "4", "0xffffffffffff"];
    assert_eq!(thinsq(&args), thinsq(&args));
}

#[test]
fn classify_prime_record() {
    let (code, out, _) = thinsq(&["classify-prime", "23"]);
    assert_eq!(code, EXIT_OK);
    let v = json(out.trim());
    assert_eq!(v["s"], 4);
    assert_eq!(v["path"], "seven_mod8");
    assert_eq!(thinsq(&["classify-prime", "91"]).0, EXIT_USAGE);
}

#[test]
fn cubes7_failure_and_success() {
    assert_eq!(thinsq(&["cubes7", "23"]).0, EXIT_NO_REPRESENTATION);
    let (code, out, _) = thinsq(&["cubes7", "10000"]);
    assert_eq!(code, EXIT_OK);
    let v = json(out.trim());
    let sum: u64 = v["parts"].as_array().unwrap().iter().map(|p| p.as_u64().unwrap().pow(3)).sum();
    assert_eq!(sum, 10_000);
}

#[test]
fn basis_build_writes_document() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("basis.json");
    let p = path.to_str().unwrap();
    let (code, out, _) = thinsq(&["--out", p, "basis", "build", "--x", "10000", "--c0", "11", "--c1", "1/1"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(out.trim())["total"], 101);
    let doc: BasisDocument = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let basis = ThinBasis::from_document(&doc).unwrap();
    assert_eq!(basis.cardinality().total, 101);
}

#[test]
fn basis_decompose_greedy_and_fallback() {
    let (code, out, _) = thinsq(&["basis", "decompose", "--x", "1000000", "999999"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(out.trim())["path"], "greedy");
    let (code, out, _) = thinsq(&["basis", "decompose", "--x", "10000", "23"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(out.trim())["path"], "small_n_fallback");
    assert_eq!(thinsq(&["basis", "decompose", "--x", "100", "1000"]).0, EXIT_USAGE);
}

#[test]
fn audit_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let summary = dir.path().join("summary.json");
    let (code, out, _) = thinsq(&[
        "--format",
        "csv",
        "basis",
        "audit",
        "--grid",
        "1000,10000,100000",
        "--coverage-max",
        "10000",
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "x,n1,n2,total,alpha1,alpha2,alpha_union,max_t,failures");
    assert_eq!(lines.count(), 3);
    let report: Value = serde_json::from_str(&fs::read_to_string(summary).unwrap()).unwrap();
    assert_eq!(report["coverage"]["x"], 10000);
    assert_eq!(report["coverage"]["audited"], 10001);
}

#[test]
fn bench_rows_to_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bench.jsonl");
    let (code, out, _) =
        thinsq(&["--out", path.to_str().unwrap(), "bench", "rs", "--bits", "16,20", "--samples", "10"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    let text = fs::read_to_string(path).unwrap();
    let rows: Vec<Value> = text.lines().map(json).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1]["bits"], 20);
    assert_eq!(rows[1]["samples"], 10);
    assert!(rows[1]["mean_trials"].as_f64().unwrap() >= 1.0);
    assert_eq!(thinsq(&["bench", "rs", "--bits", "64", "--samples", "1"]).0, EXIT_USAGE);
}

#[test]
fn csv_rejected_for_records() {
    let (code, _, err) = thinsq(&["--format", "csv", "decompose", "--squares", "4", "5"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("csv"));
}
