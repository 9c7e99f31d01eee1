use std::process::Command;

use serde_json::Value;

fn sweepwords(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_sweepwords"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, stdout, stderr) = sweepwords(args);
    let v = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{e}: {stdout} {stderr}"));
    (code, v)
}

#[test]
fn words_n2_envelope() {
    let (code, v) = json(&["words", "--n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["command"], "words");
    assert_eq!(
        v["result"]["grid"],
        serde_json::json!([["aa", "ab"], ["ba", "bb"]])
    );
    assert_eq!(v["config"]["d"], 1);
    assert_eq!(v["config"]["d_overridden"], false);
    assert!(v["paper_refs"].as_array().is_some_and(|a| !a.is_empty()));
}

#[test]
fn words_n3_grid_is_3x3() {
    let (code, v) = json(&["words", "--n", "3", "--g", "2"]);
    assert_eq!(code, 0);
    let grid = v["result"]["grid"].as_array().unwrap();
    assert_eq!(grid.len(), 3);
    assert!(grid.iter().all(|r| r.as_array().unwrap().len() == 3));
    assert_eq!(grid[0][2], "aaab");
}

#[test]
fn invalid_inputs_exit_2() {
    assert_eq!(sweepwords(&["words", "--n", "3", "--g", "1"]).0, 2);
    assert_eq!(sweepwords(&["words", "--n", "4", "--d", "3"]).0, 2);
    assert_eq!(sweepwords(&["words", "--n", "2", "--format", "dot"]).0, 2);
    assert_eq!(sweepwords(&["words", "--bogus"]).0, 2);
    assert_eq!(sweepwords(&["certify", "--n", "2", "--prime", "1000"]).0, 2);
    assert_eq!(sweepwords(&["words"]).0, 2);
}

#[test]
fn certify_examples() {
    let (code, v) = json(&["certify", "--n", "8", "--g", "2", "--trials", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["successes"], 3);
    assert_eq!(v["result"]["verdict"], "certified");

    let (code, v) = json(&["certify", "--n", "4", "--duplicate-word"]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["successes"], 0);
    assert_eq!(v["result"]["verdict"], "inconclusive");

    let (code, v) = json(&["certify", "--n", "9", "--g", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["successes"], 3);
}

#[test]
fn certify_sampling_harness_runs() {
    let (code, v) = json(&["certify", "--n", "4", "--sample-degree", "4", "--seed", "3"]);
    assert!(code == 0 || code == 1);
    assert_eq!(v["config"]["options"]["sample_degree"], 4);
}

#[test]
fn certify_output_is_byte_identical() {
    let a = sweepwords(&["certify", "--n", "5", "--seed", "42"]);
    let b = sweepwords(&["certify", "--n", "5", "--seed", "42"]);
    assert_eq!(a, b);
}

#[test]
fn graph_enumeration() {
    let (code, v) = json(&["graph", "--g", "2", "--d", "2", "--enumerate"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["enumeration"]["count"], 1);
    assert_eq!(v["result"]["certificate_partition_valid"], true);
    assert_eq!(v["result"]["edge_count"], 64);
    assert_eq!(v["config"]["d_overridden"], true);

    let (code, v) = json(&[
        "graph",
        "--g",
        "2",
        "--d",
        "1",
        "--m-scale",
        "2",
        "--enumerate",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["enumeration"]["count"], 1);
}

#[test]
fn graph_d3_exceeds_small_budget() {
    let (code, stdout, stderr) = sweepwords(&[
        "graph",
        "--g",
        "2",
        "--d",
        "3",
        "--enumerate",
        "--budget",
        "100000",
    ]);
    assert_eq!(code, 3);
    assert!(stdout.is_empty());
    assert!(stderr.contains("budget"));
}

#[test]
fn graph_dot_and_csv() {
    let (code, dot, _) = sweepwords(&["graph", "--d", "1", "--format", "dot"]);
    assert_eq!(code, 0);
    assert!(dot.starts_with("digraph"));
    let (_, csv, _) = sweepwords(&["graph", "--d", "1", "--format", "csv"]);
    assert_eq!(csv.lines().next(), Some("from,to,label,mult"));
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn length_n1_edge_case() {
    let (code, v) = json(&["length", "--n", "1"]);
    assert_eq!(code, 0);
    for t in v["result"]["experiments"][0]["trials"].as_array().unwrap() {
        assert_eq!(t["length"], 1);
    }
}

#[test]
fn length_csv_sweep() {
    let (code, csv, _) = sweepwords(&[
        "length", "--n", "2", "--n-max", "10", "--trials", "2", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "n,trial,length,chain,log_bound,paz_bound,within_bounds"
    );
    assert_eq!(lines.len(), 1 + 9 * 2);
    assert!(lines[1..].iter().all(|l| l.ends_with(",true")));
}

#[test]
fn witness_examples() {
    let (code, v) = json(&["witness", "--n", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["certified"], true);
    assert_ne!(v["result"]["discriminant"], "0");

    let (code, v) = json(&["witness", "--n", "2", "--base", "2", "--force-base"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["base"], "2");
    assert_eq!(v["result"]["escalations"], 0);
    // B^0 * B^1 * B^2 * B^3 with B = 2
    assert_eq!(v["result"]["discriminant"], "64");
}

#[test]
fn witness_n2_default_is_stable() {
    let a = sweepwords(&["witness", "--n", "2"]);
    let b = sweepwords(&["witness", "--n", "2"]);
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a.1).unwrap();
    assert_eq!(v["result"]["base"], "9");
    assert_eq!(v["result"]["discriminant"], "531441");
    assert_eq!(v["result"]["m_constant"], "8");
}

#[test]
fn witness_paper_constants_are_labeled() {
    let (code, v) = json(&["witness", "--n", "4", "--paper-constants"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["paper_constants"]["label"], "as printed");
    assert_eq!(
        v["result"]["paper_constants"]["c"],
        serde_json::json!([3, 5])
    );
}

#[test]
fn rosenthal_command() {
    let (code, v) = json(&["rosenthal", "--n", "8", "--g", "2", "--d", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["all_span"], true);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.json");
    let (code, stdout, _) = sweepwords(&["words", "--n", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["result"]["n"], 2);
}

#[test]
fn library_entry_point_matches_binary() {
    let lib = sweepwords_core::cli::run_args(["sweepwords", "words", "--n", "3"]);
    let (code, stdout, _) = sweepwords(&["words", "--n", "3"]);
    assert_eq!((lib.code, lib.stdout), (code, stdout));
}
