//! End-to-end runs of the `stone` binary: exit codes, output formats,
//! round-trips, and byte-level determinism.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn stone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stone"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn validate_exit_codes_and_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(
        dir.path(),
        "good.json",
        r#"{"labels":["a","b"],"dist":[[0,1],[1,0]]}"#,
    );
    let out = stone(&["validate", "--input", &good]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["ok"], Value::Bool(true));
    assert_eq!(v["points"], 2);

    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"dist":[[0,1,3],[1,0,1],[3,1,0]]}"#,
    );
    let out = stone(&["validate", "--input", &bad]);
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    assert_eq!(v["ok"], Value::Bool(false));
    assert_eq!(v["error"]["kind"], "TriangleViolation");
    assert_eq!(v["error"]["i"], 0);
    assert_eq!(v["error"]["k"], 2);

    let out = stone(&["validate", "--input", "/nonexistent/space.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn validate_asymmetric_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let asym = write(dir.path(), "asym.json", r#"{"dist":[[0,1],[2,0]]}"#);
    let out = stone(&["validate", "--input", &asym]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"]["kind"], "AsymmetricMatrix");
}

#[test]
fn delta_oracle_columns_agree() {
    let out = stone(&[
        "delta",
        "--gen",
        r#"{"kind":"random-integer","n":4,"max":7}"#,
        "--seed",
        "11",
        "--kind",
        "uniform",
        "--oracle",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let mut plain = BTreeMap::new();
    let mut oracle = BTreeMap::new();
    for line in text.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 3);
        match cells[0] {
            "uniform" => plain.insert(cells[1].to_string(), cells[2].to_string()),
            "uniform-oracle" => oracle.insert(cells[1].to_string(), cells[2].to_string()),
            other => panic!("unexpected kind {other}"),
        };
    }
    assert!(!plain.is_empty());
    assert_eq!(plain, oracle);
    // beyond the diameter the uniform modulus is infinite
    assert!(text.lines().any(|l| l.ends_with(",inf")));
}

#[test]
fn delta_rejects_oracle_on_large_spaces() {
    let out = stone(&[
        "delta",
        "--gen",
        r#"{"kind":"random-integer","n":6,"max":7}"#,
        "--kind",
        "coarse",
        "--oracle",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn cover_clique_checks_pass_and_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let space = write(
        dir.path(),
        "line.json",
        r#"{"dist":[[0,1,2],[1,0,1],[2,1,0]]}"#,
    );
    let out = stone(&[
        "cover", "--input", &space, "--kind", "clique", "--radius", "1.5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["pass"], Value::Bool(true));
    assert_eq!(v["cover"]["members"], serde_json::json!([[0, 1], [1, 2]]));
    assert_eq!(v["lebesgue"], 2.0);
    // emitted cover parses back into the same members
    let file: Value = serde_json::from_str(&v["cover"].to_string()).unwrap();
    assert_eq!(file["members"], v["cover"]["members"]);
}

#[test]
fn cover_greedy_and_tree_kinds() {
    let dir = tempfile::tempdir().unwrap();
    let space = write(dir.path(), "line10.json", &{
        let pts: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64]).collect();
        serde_json::json!({"points": pts, "p": "inf"}).to_string()
    });
    let out = stone(&[
        "cover", "--input", &space, "--kind", "greedy", "--radius", "4", "--eps", "1",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(stdout_json(&out)["pass"], Value::Bool(true));

    let tree = write(
        dir.path(),
        "tree.json",
        r#"{"tree":{"edges":[["r","a",1],["r","b",1],["r","c",1]],"root":"r"}}"#,
    );
    let out = stone(&[
        "cover", "--input", &tree, "--kind", "tree", "--radius", "1", "--subdiv", "1",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = stdout_json(&out);
    assert_eq!(v["pass"], Value::Bool(true));
    assert_eq!(v["point_labels"][0], "r");
}

#[test]
fn cover_parametric_queries() {
    let out = stone(&[
        "cover",
        "--kind",
        "linf-grid",
        "--dim",
        "1",
        "--subdiv",
        "1",
        "--query",
        "multiplicity",
        "--point",
        "[0.5]",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["count"], 3);
    assert_eq!(v["cells"], serde_json::json!([[-1], [0], [1]]));

    let out = stone(&[
        "cover",
        "--kind",
        "c0-grid",
        "--radius",
        "1",
        "--subdiv",
        "2",
        "--query",
        "locate",
        "--point",
        r#"{"0": 3.0}"#,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["cell"]["offsets"]["0"], 4);

    let out = stone(&[
        "cover",
        "--kind",
        "c0-grid",
        "--radius",
        "1",
        "--subdiv",
        "2",
        "--query",
        "membership",
        "--point",
        r#"{"0": 2.5}"#,
        "--cell",
        r#"{"support":["0"],"offsets":{"0":4}}"#,
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["contains"], Value::Bool(true));
}

#[test]
fn embed_deterministic_and_certified() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "embed",
        "--gen",
        r#"{"kind":"random-integer","n":20,"max":9}"#,
        "--seed",
        "7",
        "--t",
        "1.5",
        "--eps",
        "0.25",
        "--lambda",
        "0.25",
    ];
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let out = stone(&[&args[..], &["--output", a.to_str().unwrap()]].concat());
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let out = stone(&[&args[..], &["--output", b.to_str().unwrap()]].concat());
    assert_eq!(out.status.code(), Some(0));
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert_eq!(
        bytes_a, bytes_b,
        "same config and seed must be byte-identical"
    );

    let v: Value = serde_json::from_slice(&bytes_a).unwrap();
    assert_eq!(v["K"], 5.0);
    assert_eq!(v["L"], 0.0);
    assert_eq!(v["report"]["pass"], Value::Bool(true));
    // the base point's image is the zero sequence
    let base = v["config"]["base_point"].as_str().unwrap();
    assert_eq!(v["points"][base], serde_json::json!({}));
}

#[test]
fn embed_with_explicit_scales_and_offset() {
    let out = stone(&[
        "embed",
        "--gen",
        r#"{"kind":"random-integer","n":10,"max":9}"#,
        "--seed",
        "2",
        "--scales",
        "-3..8",
        "--big-d",
        "0.3",
    ]);
    assert_eq!(
        out.status.code(),
        Some(2),
        "scales below the admissible set must be rejected"
    );

    let out = stone(&[
        "embed",
        "--gen",
        r#"{"kind":"random-integer","n":10,"max":9}"#,
        "--seed",
        "2",
        "--scales",
        "1..8",
        "--big-d",
        "0.3",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = stdout_json(&out);
    assert_eq!(v["config"]["scale_range"], serde_json::json!([1, 8]));
    let l = v["L"].as_f64().unwrap();
    let floor = v["config"]["truncation_floor"].as_f64().unwrap();
    assert_eq!(l, floor);
    assert!(l > 0.0);
}

#[test]
fn embed_rejects_nonpositive_lambda() {
    let out = stone(&[
        "embed",
        "--gen",
        r#"{"kind":"random-integer","n":5,"max":9}"#,
        "--lambda",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("lambda"), "stderr: {err}");
}

#[test]
fn embed_single_point_space() {
    let out = stone(&[
        "embed",
        "--gen",
        r#"{"kind":"lp-cloud","n":1,"dim":2,"p":2}"#,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["report"]["pass"], Value::Bool(true));
}

#[test]
fn report_merges_curves_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let c1 = dir.path().join("c1.csv");
    let out = stone(&[
        "delta",
        "--gen",
        r#"{"kind":"random-integer","n":4,"max":5}"#,
        "--kind",
        "coarse",
        "--output",
        c1.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let e1 = dir.path().join("e1.json");
    let out = stone(&[
        "embed",
        "--gen",
        r#"{"kind":"random-integer","n":6,"max":5}"#,
        "--output",
        e1.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    // single input: rows pass through under a source column
    let out = stone(&["report", c1.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let merged = String::from_utf8(out.stdout).unwrap();
    let curve = std::fs::read_to_string(&c1).unwrap();
    assert_eq!(
        merged.lines().count(),
        curve.lines().count(),
        "passthrough keeps every data row plus one header"
    );
    for (m, c) in merged.lines().skip(1).zip(curve.lines().skip(1)) {
        assert_eq!(m, &format!("{},{}", c1.to_str().unwrap(), c));
    }

    // two inputs concatenate; json reports flatten to key/value rows
    let out = stone(&["report", c1.to_str().unwrap(), e1.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let merged = String::from_utf8(out.stdout).unwrap();
    assert!(merged.lines().any(|l| l.contains("report.pass,,true")));
    assert!(merged.lines().count() > curve.lines().count());

    // empty input list is a usage error
    let out = stone(&["report"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn clique_cap_env_var_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_stone"))
        .args([
            "delta",
            "--gen",
            r#"{"kind":"lp-cloud","n":16,"dim":4,"p":2}"#,
            "--kind",
            "coarse",
        ])
        .env("STONE_CLIQUE_CAP", "1")
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("cap"), "stderr: {err}");
}

#[test]
fn space_json_roundtrips_exactly() {
    // emit a generated cloud's matrix, re-validate, distances identical
    let dir = tempfile::tempdir().unwrap();
    let out = stone(&[
        "validate",
        "--gen",
        r#"{"kind":"lp-cloud","n":7,"dim":3,"p":2.5}"#,
    ]);
    assert_eq!(out.status.code(), Some(0));
    // the validate output carries labels only; round-trip the curve instead
    let c = dir.path().join("c.csv");
    let args = [
        "delta",
        "--gen",
        r#"{"kind":"lp-cloud","n":7,"dim":3,"p":2.5}"#,
        "--kind",
        "uniform",
    ];
    let out1 = stone(&[&args[..], &["--output", c.to_str().unwrap()]].concat());
    assert_eq!(out1.status.code(), Some(0));
    let first = std::fs::read_to_string(&c).unwrap();
    for line in first.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        let arg: f64 = cells[1].parse().unwrap();
        assert!(arg.is_finite());
        if cells[2] != "inf" {
            let val: f64 = cells[2].parse().unwrap();
            assert!(val.is_finite());
        }
    }
    let out2 = stone(&args);
    assert_eq!(String::from_utf8(out2.stdout).unwrap(), first);
}
