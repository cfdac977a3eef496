mod common;

use std::fs;
use std::path::PathBuf;
use std::process::Command;

use graphframe::cli::run_from_args;
use graphframe::fixtures;
use serde_json::Value;

use common::*;

fn run(args: &[&str]) -> graphframe::cli::Outcome {
    run_from_args(std::iter::once("graphframe").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn fixture(name: &str) -> String {
    fixture_path(name).to_string_lossy().into_owned()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("graphframe-{}-{name}", std::process::id()));
    fs::write(&path, contents).unwrap();
    path
}

const COMMANDS: [&str; 6] = ["graph-info", "frame-build", "frame-spark", "od-verdict", "od-search", "dr-table"];

fn walk(v: &Value, f: &mut impl FnMut(&Value)) {
    f(v);
    match v {
        Value::Array(items) => items.iter().for_each(|x| walk(x, f)),
        Value::Object(map) => map.values().for_each(|x| walk(x, f)),
        _ => {}
    }
}

#[test]
fn output_is_byte_identical_across_runs_and_worker_counts() {
    for cmd in COMMANDS {
        for name in ["figure1", "figure2", "petersen"] {
            let base = [cmd, &fixture(name), "--trials", "300", "--seed", "4"];
            let a = run(&base);
            let b = run(&base);
            assert_eq!(a.code, 0, "{cmd} {name}: {}", a.stderr);
            assert_eq!(a.stdout, b.stdout);
            let one = run(&[&base[..], &["--jobs", "1"]].concat());
            let four = run(&[&base[..], &["--jobs", "4"]].concat());
            assert_eq!(one.stdout, four.stdout, "{cmd} {name}");
            assert_eq!(one.stdout, a.stdout, "{cmd} {name}");
        }
    }
}

fn significant_digits(token: &str) -> usize {
    let mantissa = token.split(['e', 'E']).next().unwrap();
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    digits.trim_start_matches('0').trim_end_matches('0').len()
}

#[test]
fn json_has_no_nulls_and_rounded_floats() {
    for cmd in COMMANDS {
        for (name, _) in fixtures::all() {
            let v = json(&[cmd, &fixture(name), "--trials", "200"]);
            for key in ["tool_version", "command", "input", "config", "graph"] {
                assert!(v.get(key).is_some(), "{cmd} {name} lacks {key}");
            }
            assert_eq!(v["command"], cmd);
            walk(&v, &mut |x| assert!(!x.is_null(), "{cmd} {name}: null in output"));
            let out = run(&[cmd, &fixture(name), "--trials", "200"]).stdout;
            for token in out.split(|c: char| !(c.is_ascii_digit() || ".eE+-".contains(c))) {
                if token.contains('.') {
                    assert!(significant_digits(token) <= 12, "{cmd} {name}: {token}");
                }
            }
        }
    }
}

#[test]
fn graph_info_on_figure2() {
    let v = json(&["graph-info", &fixture("figure2")]);
    assert_eq!(v["graph"]["n"], 8);
    assert_eq!(v["graph"]["m"], 12);
    assert_eq!(v["graph"]["regular"], 3);
    assert_eq!(v["graph"]["connected"], true);
    assert_eq!(v["graph"]["walk_regular"]["is_walk_regular"], false);
    assert_eq!(v["graph"]["walk_regular"]["definition_agrees"], true);
    let spread = v["graph"]["pinv_diagonal_spread"]["laplacian"].as_f64().unwrap();
    assert!((spread - 0.0328).abs() < 1e-3);
    let path = json(&["graph-info", &fixture("path3")]);
    assert_eq!(path["graph"]["regular"], false);
}

#[test]
fn od_verdict_on_figure1() {
    let v = json(&["od-verdict", &fixture("figure1")]);
    assert_eq!(v["erasure"]["verdict"], "OD_1_ERASURE");
    let d1 = v["erasure"]["d1_canonical"].as_f64().unwrap();
    assert!((d1 - 0.790569415042).abs() < 1e-11, "{d1}");
    assert_eq!(v["graph"]["components"].as_array().unwrap().len(), 2);
    // vertex labels in reports are 1-based
    let lambda1: Vec<u64> = v["erasure"]["lambda1_set"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    assert!(lambda1.iter().all(|&i| (1..=7).contains(&i)));
}

#[test]
fn frame_spark_on_figure1() {
    let v = json(&["frame-spark", &fixture("figure1")]);
    assert_eq!(v["spark"]["value"], 3);
    assert_eq!(v["spark"]["method_agreement"], true);
    assert_eq!(v["spark"]["full_spark"], false);
}

#[test]
fn od_search_on_figure2_improves() {
    let v = json(&["od-search", &fixture("figure2"), "--trials", "1000", "--seed", "9"]);
    assert_eq!(v["erasure"]["verdict"], "NOT_OD");
    let best = &v["erasure"]["search_best"];
    assert_eq!(best["improved"], true);
    assert!(best["canonical_d1"].as_f64().unwrap() - best["d1"].as_f64().unwrap() >= 5e-4);
}

#[test]
fn csv_and_text_formats() {
    for (name, g) in fixtures::all() {
        for cmd in ["graph-info", "frame-build", "od-verdict"] {
            let out = run(&[cmd, &fixture(name), "--format", "csv", "--trials", "100"]);
            assert_eq!(out.code, 0);
            assert_eq!(out.stdout.lines().count(), g.vertex_count() + 1, "{cmd} {name}");
            assert!(out.stdout.starts_with("vertex,component,degree"));
        }
    }
    let out = run(&["dr-table", &fixture("k3"), "--format", "csv", "--max-r", "2"]);
    assert_eq!(out.stdout.lines().count(), 3);
    let out = run(&["od-verdict", &fixture("figure1"), "--format", "text"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("verdict: OD_1_ERASURE"), "{}", out.stdout);
}

#[test]
fn input_errors_exit_with_one() {
    assert_eq!(run(&["graph-info", "/nonexistent/graph.edges"]).code, 1);
    let bad = temp_file("bad.edges", "3 2\n1 2\n");
    assert_eq!(run(&["graph-info", bad.to_str().unwrap()]).code, 1);
    let isolated = temp_file("isolated.edges", "4 2\n1 2\n2 3\n");
    let out = run(&["frame-build", isolated.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains('4'), "{}", out.stderr);
    // graph-info does not need a frame
    assert_eq!(run(&["graph-info", isolated.to_str().unwrap()]).code, 0);
    assert_eq!(run(&["graph-info"]).code, 1);
    assert_eq!(run(&["no-such-command", &fixture("k3")]).code, 1);
    assert_eq!(run(&["graph-info", &fixture("k3"), "--zero-tol", "-1"]).code, 1);
    assert_eq!(run(&["--help"]).code, 0);
    fs::remove_file(bad).unwrap();
    fs::remove_file(isolated).unwrap();
}

#[test]
fn guards_exit_with_three() {
    let c40 = temp_file("c40.edges", &fixtures::cycle(40).to_edge_list());
    let out = run(&["frame-spark", c40.to_str().unwrap()]);
    assert_eq!(out.code, 3, "{}", out.stderr);
    assert!(out.stdout.is_empty());
    let out = run(&["dr-table", c40.to_str().unwrap(), "--max-r", "10"]);
    assert_eq!(out.code, 3);
    let v = json(&["dr-table", c40.to_str().unwrap(), "--max-r", "10", "--monte-carlo", "50"]);
    assert_eq!(v["erasure"]["dr_table"]["lower_bound"], true);
    assert_eq!(v["erasure"]["dr_table"]["rows"].as_array().unwrap().len(), 10);
    fs::remove_file(c40).unwrap();
}

#[test]
fn dr_table_rows_and_given_dual() {
    let v = json(&["dr-table", &fixture("petersen"), "--max-r", "6"]);
    let table = &v["erasure"]["dr_table"];
    assert_eq!(table["lower_bound"], false);
    assert_eq!(table["canonical_monotone"], false);
    let rows = table["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    let d1 = rows[0]["canonical"]["value"].as_f64().unwrap();
    assert!((d1 - v["erasure"]["d1_canonical"].as_f64().unwrap()).abs() < 1e-11);

    let shifts = "[[0,0,0,0.01,0.01],[0,0,0,0,0]]";
    let v = json(&["dr-table", &fixture("figure1"), "--shifts", shifts]);
    let table = &v["erasure"]["dr_table"];
    assert!(table["given_duality_residual"].as_f64().unwrap() < 1e-9);
    assert!(table["rows"][0]["given"]["value"].as_f64().is_some());
    let file = temp_file("shifts.json", shifts);
    let w = json(&["dr-table", &fixture("figure1"), "--shifts", file.to_str().unwrap()]);
    assert_eq!(v["erasure"], w["erasure"]);
    fs::remove_file(file).unwrap();
    assert_eq!(run(&["dr-table", &fixture("figure1"), "--shifts", "[[0,0]]"]).code, 1);
    assert_eq!(run(&["dr-table", &fixture("figure1"), "--shifts", "[[0,0"]).code, 1);
}

#[test]
fn emitting_vectors_warns() {
    let out = run(&["frame-build", &fixture("figure1"), "--emit-vectors"]);
    assert_eq!(out.code, 0);
    assert!(!out.stderr.is_empty());
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["frame"]["basis_dependent"], true);
    assert_eq!(v["frame"]["vectors"].as_array().unwrap().len(), 7);
    let quiet = run(&["frame-build", &fixture("figure1")]);
    assert!(quiet.stderr.is_empty());
    assert!(serde_json::from_str::<Value>(&quiet.stdout).unwrap()["frame"].get("vectors").is_none());
}

#[test]
fn binary_matches_library_entry_point() {
    let bin = env!("CARGO_BIN_EXE_graphframe");
    for args in [
        vec!["graph-info", "figure2"],
        vec!["od-verdict", "figure1"],
        vec!["frame-spark", "figure1"],
    ] {
        let path = fixture(args[1]);
        let out = Command::new(bin).args([args[0], &path]).output().unwrap();
        let lib = run(&[args[0], &path]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(String::from_utf8(out.stdout).unwrap(), lib.stdout);
    }
    let out = Command::new(bin).args(["graph-info", "/nonexistent"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}
