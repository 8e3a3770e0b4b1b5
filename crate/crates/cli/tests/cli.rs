use std::collections::{BTreeMap, BTreeSet};

use assert_cmd::Command;
use serde_json::Value;

fn run(args: &[&str]) -> assert_cmd::assert::Assert {
    Command::cargo_bin("mangulations").unwrap().env_remove("MANGULATIONS_UNGUARDED").args(args).assert()
}

fn stdout(args: &[&str]) -> String {
    String::from_utf8(run(args).success().get_output().stdout.clone()).unwrap()
}

fn csv_rows(out: &str) -> usize {
    csv::Reader::from_reader(out.as_bytes()).records().map(|r| r.unwrap()).count()
}

#[test]
fn enumerate_row_counts() {
    assert_eq!(csv_rows(&stdout(&["enumerate", "--m", "2", "--n", "2", "--format", "csv"])), 3);
    assert_eq!(csv_rows(&stdout(&["enumerate", "--m", "2", "--n", "2", "--final", "--format", "csv"])), 2);
    assert_eq!(csv_rows(&stdout(&["enumerate", "--m", "1", "--n", "1", "--format", "csv"])), 1);
    let json: Value = serde_json::from_str(&stdout(&["enumerate", "--m", "2", "--n", "3"])).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 12);
}

#[test]
fn enumerate_json_fields() {
    let json: Value = serde_json::from_str(&stdout(&["enumerate", "--m", "1", "--n", "2", "--final"])).unwrap();
    let row = &json[0];
    assert_eq!(row["rank"], 1);
    assert_eq!(row["final"], true);
    assert_eq!(row["polynomial"], "(x2-x1)");
    assert_eq!(row["leadingMonomial"], "x2");
}

/// Node ids and edges of a `digraph`, read line by line.
fn parse_dot(dot: &str) -> (BTreeMap<String, usize>, BTreeSet<(String, String)>) {
    let mut nodes = BTreeMap::new();
    let mut edges = BTreeSet::new();
    assert!(dot.trim_start().starts_with("digraph"));
    assert!(dot.trim_end().ends_with('}'));
    for line in dot.lines().map(str::trim) {
        let Some(body) = line.strip_suffix(';') else { continue };
        if let Some((a, b)) = body.split_once(" -> ") {
            edges.insert((a.to_string(), b.to_string()));
        } else if let Some((id, attrs)) = body.split_once(" [") {
            let rank = attrs.split("rank=").nth(1).unwrap().split(',').next().unwrap();
            nodes.insert(id.to_string(), rank.parse().unwrap());
        }
    }
    (nodes, edges)
}

#[test]
fn poset_dot_round_trip() {
    let (nodes, edges) = parse_dot(&stdout(&["poset", "--m", "2", "--n", "3", "--emit", "dot"]));
    assert_eq!(nodes.len(), 12);
    assert_eq!(edges.len(), 12);
    for (a, b) in &edges {
        assert_eq!(nodes[a] + 1, nodes[b], "{a} -> {b} is not a cover");
    }
    let json: Value = serde_json::from_str(&stdout(&["poset", "--m", "2", "--n", "3", "--emit", "json"])).unwrap();
    assert_eq!(json["elements"].as_array().unwrap().len(), 12);
    assert_eq!(json["covers"].as_array().unwrap().len(), 12);
}

#[test]
fn series_output() {
    let out = stdout(&["series", "--m", "2", "--order", "4", "--which", "T"]);
    let got: Vec<String> = csv::Reader::from_reader(out.as_bytes())
        .records()
        .map(|r| r.unwrap()[1].to_string())
        .collect();
    assert_eq!(got, ["1", "3", "12", "55"]);
    let json: Value =
        serde_json::from_str(&stdout(&["series", "--m", "2", "--order", "3", "--which", "G", "--format", "json"]))
            .unwrap();
    assert_eq!(json["coefficients"], serde_json::json!([[1], [1, 2], [1, 4, 7]]));
    let json: Value =
        serde_json::from_str(&stdout(&["series", "--m", "2", "--order", "3", "--which", "F", "--format", "json"]))
            .unwrap();
    assert_eq!(json["coefficients"], serde_json::json!([1, 2, 7]));
}

#[test]
fn verify_reports() {
    let json: Value = serde_json::from_str(&stdout(&["verify", "--m", "2", "--n", "2"])).unwrap();
    let reports = json.as_array().unwrap();
    assert_eq!(reports.len(), 6);
    assert!(reports.iter().all(|r| r["pass"] == true));
    let json: Value = serde_json::from_str(&stdout(&["verify", "--m", "1", "--n", "3", "--suite", "bijection"])).unwrap();
    assert_eq!(json[0]["suite"], "bijection");
}

#[test]
fn usage_and_guard_errors() {
    run(&["enumerate", "--m", "0", "--n", "2"]).code(2);
    run(&["verify", "--m", "2", "--n", "2", "--suite", "nonsense"]).code(2);
    run(&["enumerate", "--m", "3", "--n", "9"]).code(2);
    run(&["series", "--m", "2", "--which", "X"]).code(2);
}
