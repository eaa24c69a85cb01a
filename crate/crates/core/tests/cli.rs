mod common;

use std::path::PathBuf;
use std::process::{Command, Output};

fn commtune(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_commtune"))
        .args(args)
        .output()
        .unwrap()
}

fn karate_file(ext: &str) -> String {
    common::data_dir()
        .join(format!("karate.{ext}"))
        .to_string_lossy()
        .into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("commtune-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn detect_karate_writes_one_label_per_vertex() {
    let o = commtune(&["detect", "--edges", &karate_file("edges"), "--seed", "3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert!(lines.next().unwrap().starts_with("# objective="));
    let labels: Vec<&str> = lines.collect();
    assert_eq!(labels.len(), 34);
    assert!(labels.iter().all(|l| l.split_whitespace().count() == 2));
}

#[test]
fn detect_triangle_is_one_community() {
    let dir = scratch("triangle");
    let edges = dir.join("tri.edges");
    std::fs::write(&edges, "a b\nb c\nc a\n").unwrap();
    let o = commtune(&["detect", "--edges", edges.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("communities=1"));
    let labels = std::fs::read_to_string(dir.join("tri.labels")).unwrap();
    let ids: std::collections::HashSet<&str> =
        labels.lines().map(|l| l.split_whitespace().nth(1).unwrap()).collect();
    assert_eq!(ids.len(), 1);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(commtune(&["--help"]).status.code(), Some(0));
    assert_eq!(commtune(&["--version"]).status.code(), Some(0));
    assert_eq!(commtune(&[]).status.code(), Some(1));
    assert_eq!(commtune(&["detect", "--bogus"]).status.code(), Some(1));
    let bad_param = commtune(&["detect", "--edges", &karate_file("edges"), "--param", "-1"]);
    assert_eq!(bad_param.status.code(), Some(1));
    let bad_grid = commtune(&["tune", "--edges", &karate_file("edges"), "--grid", "1:0:0.1"]);
    assert_eq!(bad_grid.status.code(), Some(1));
    let missing = commtune(&["detect", "--edges", "/nonexistent/graph.edges"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).starts_with("error:"));
    let infeasible = commtune(&["generate", "--n", "200", "--mean-degree", "80", "--max-degree", "60", "--max-community", "100"]);
    assert_eq!(infeasible.status.code(), Some(3));
}

#[test]
fn singleton_grid_returns_its_only_candidate() {
    let o = commtune(&[
        "tune", "--edges", &karate_file("edges"), "--grid", "0.7", "--n-graphs", "2", "--n-runs", "2",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("chosen_gamma: 0.7\n"), "{}", stdout(&o));
}

#[test]
fn tune_json_parses() {
    let o = commtune(&[
        "tune", "--edges", &karate_file("edges"), "--grid", "0.5,1", "--n-graphs", "3", "--n-runs", "2",
        "--metric", "rand", "--format", "json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["per_graph_best"].as_array().unwrap().len(), 3);
    assert!([0.5, 1.0].contains(&v["chosen"].as_f64().unwrap()));
}

#[test]
fn stability_frequencies_sum_to_graph_count() {
    let o = commtune(&[
        "stability", "--edges", &karate_file("edges"), "--grid", "0.5:1.5:0.25", "--n-graphs", "6",
        "--n-runs", "2", "--format", "csv",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("param,frequency"));
    let total: usize = lines.map(|l| l.split(',').nth(1).unwrap().parse::<usize>().unwrap()).sum();
    assert_eq!(total, 6);
}

#[test]
fn estimate_reports_karate_shape() {
    let o = commtune(&["estimate", "--edges", &karate_file("edges"), "--labels", &karate_file("labels")]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("n=34 "), "{out}");
    assert!(out.contains("max_degree=17 "), "{out}");
    assert!(out.contains("mixing=0.1282 "), "{out}");
}

#[test]
fn experiment_csv_and_text_carry_the_same_numbers() {
    let args = [
        "experiment", "--edges", &karate_file("edges"), "--labels", &karate_file("labels"), "--grid", "0.5,1",
        "--n-graphs", "2", "--n-runs", "2", "--n-runs-eval", "5", "--seed", "4",
    ];
    let text = stdout(&commtune(&args));
    let mut csv_args = args.to_vec();
    csv_args.extend(["--format", "csv"]);
    let csv = stdout(&commtune(&csv_args));
    let csv_rows: Vec<Vec<String>> = csv
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    let text_rows: Vec<Vec<String>> = text
        .lines()
        .map(|l| l.split_whitespace().map(str::to_string).collect())
        .collect();
    assert_eq!(csv_rows.len(), 4);
    assert_eq!(csv_rows, text_rows);
}

#[test]
fn generate_writes_instance_files() {
    let dir = scratch("generate");
    let o = commtune(&[
        "generate", "--n", "200", "--mean-degree", "8", "--max-degree", "20", "--min-community", "15",
        "--max-community", "40", "--mixing", "0.2", "--out", dir.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("n=200 "));
    let labels = std::fs::read_to_string(dir.join("lfr.labels")).unwrap();
    assert_eq!(labels.lines().count(), 200);
    assert!(dir.join("lfr.edges").exists());
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn datasets_lists_reference_graphs() {
    let out = stdout(&commtune(&["datasets"]));
    assert!(out.contains("karate"));
    assert!(out.contains("football"));
}
