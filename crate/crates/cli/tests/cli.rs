use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_morse-moduli"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn write(dir: &Path, name: &str, doc: &Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, doc.to_string()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// A Morse function on the 3-path with two critical vertices and one
/// critical edge.
fn path_function(dir: &Path) -> PathBuf {
    write(
        dir,
        "f.json",
        &json!({"values": {"a": "0", "b": "2", "c": "1", "ab": "3", "bc": "3/2"}}),
    )
}

#[test]
fn check_and_matching_agree() {
    let dir = tempfile::tempdir().unwrap();
    let f = path_function(dir.path());
    let check = ok(&["check", "--complex", "path3", "--function", s(&f)]);
    assert_eq!(check["morse"], json!(true));
    assert_eq!(check["violation"], Value::Null);
    let matching = ok(&["matching", "--complex", "path3", "--function", s(&f)]);
    assert_eq!(matching["pairs"], json!([["b", "bc"]]));
    assert_eq!(matching["critical"], json!({"0": ["a", "c"], "1": ["ab"]}));
    assert_eq!(matching["acyclic"], json!(true));
}

#[test]
fn merge_tree_output_feeds_barcode_and_distance() {
    let dir = tempfile::tempdir().unwrap();
    let f = path_function(dir.path());
    let tree = ok(&["merge-tree", "--complex", "path3", "--function", s(&f)]);
    assert_eq!(tree["classification"], json!("well_branched"));
    let tree_path = write(dir.path(), "tree.json", &tree["tree"]);

    let bars = ok(&["barcode", "--tree", s(&tree_path)]);
    let bars = bars["bars"].as_array().unwrap();
    assert_eq!(bars.len(), 2);
    let mut pairs: Vec<(String, String)> = bars
        .iter()
        .map(|b| (b["birth"].as_str().unwrap().into(), b["death"].as_str().unwrap().into()))
        .collect();
    pairs.sort();
    assert_eq!(pairs, [("0".into(), "3".into()), ("1".into(), "3".into())]);

    let d = ok(&["tree-dist", "--tree", s(&tree_path), "--tree", s(&tree_path)]);
    assert_eq!(d["distance"]["approx"], json!(0.0));
    assert_eq!(d["exact"], json!(true));
}

#[test]
fn bar_dist_reports_terms() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(
        dir.path(),
        "a.json",
        &json!({"bars": [{"id": "x", "birth": "0", "death": "2"}]}),
    );
    let b = write(
        dir.path(),
        "b.json",
        &json!({"bars": [{"id": "x", "birth": "0", "death": "3"}]}),
    );
    let d = ok(&["bar-dist", "--barcode", s(&a), "--barcode", s(&b)]);
    assert_eq!(d["distance"], json!({"terms": ["1"], "approx": 1.0}));
}

#[test]
fn bad_input_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "bad.json",
        &json!({"values": {"a": "0", "b": "x/2", "ab": "1"}}),
    );
    let out = run(&["check", "--complex", "I", "--function", s(&f)]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["field"], json!("values.b"));

    let out = run(&["regions", "--complex", "no_such_complex"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cut_short_enumeration_exits_with_three() {
    let out = run(&["regions", "--complex", "simplex2", "--max-steps", "2"]);
    assert_eq!(out.status.code(), Some(3));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["complete"], json!(false));
    assert_eq!(doc["regions"].as_array().unwrap().len(), 2);
}

#[test]
fn output_flag_writes_the_same_document() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.json");
    let out = run(&["regions", "--complex", "I", "--output", s(&target)]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(written, ok(&["regions", "--complex", "I"]));
    assert_eq!(written["count"], json!(4));
}

#[test]
fn parallel_runs_are_deterministic() {
    let args = ["--jobs", "4", "regions", "--complex", "boundary2", "--morse-only"];
    let first = run(&args);
    let second = run(&["--jobs", "1", "regions", "--complex", "boundary2", "--morse-only"]);
    assert!(first.status.success() && second.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn pullback_along_an_inclusion() {
    let dir = tempfile::tempdir().unwrap();
    let map = write(
        dir.path(),
        "map.json",
        &json!({"source": "I", "target": "path3", "assignment": {"a": "a", "b": "b", "ab": "ab"}}),
    );
    let f = path_function(dir.path());
    let out = ok(&["pullback", "--map", s(&map), "--function", s(&f)]);
    assert_eq!(out["function"]["values"], json!({"a": "0", "ab": "3", "b": "2"}));
    assert_eq!(out["morse"], json!(true));
}

#[test]
fn crossings_between_two_functions() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "f.json",
        &json!({"values": {"a": "0", "b": "1", "ab": "2"}}),
    );
    let g = write(
        dir.path(),
        "g.json",
        &json!({"values": {"a": "1", "b": "0", "ab": "-1"}}),
    );
    let out = ok(&["crossings", "--complex", "I", "--function", s(&f), "--function", s(&g)]);
    assert_eq!(out["count"], json!(3));
    let in_arrangement = out["crossings"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["in_morse_arrangement"] == json!(true))
        .count();
    assert_eq!(in_arrangement, 2);
}
