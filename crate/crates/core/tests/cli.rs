use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_argrule"))
        .arg("--quiet")
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Learns a Voting model on the whole file.
fn voting_model(dir: &TempDir, variant: &str) -> PathBuf {
    let model = dir.path().join(format!("voting-{variant}.json"));
    let o = run(&[
        "learn",
        "--data",
        path(&data("voting.csv")),
        "--positive-class",
        "democrat",
        "--variant",
        variant,
        "--iterations",
        "30",
        "--out",
        path(&model),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("train accuracy"));
    model
}

fn model_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn predict_on_training_rows_reproduces_train_accuracy() {
    let dir = TempDir::new().unwrap();
    let model = voting_model(&dir, "base");
    let o = run(&["predict", "--model", path(&model), "--data", path(&data("voting.csv")), "--format", "json"]);
    assert!(o.status.success());
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["predictions"].as_array().unwrap().len(), 435);
    assert_eq!(report["accuracy"], model_json(&model)["training"]["train_accuracy"]);

    let text = run(&["predict", "--model", path(&model), "--data", path(&data("voting.csv"))]);
    let lines: Vec<String> = stdout(&text).lines().map(String::from).collect();
    assert_eq!(lines.len(), 435);
    assert!(lines[0].starts_with("0,"));
}

#[test]
fn bipolar_model_records_its_variant() {
    let dir = TempDir::new().unwrap();
    let model = voting_model(&dir, "bipolar");
    let json = model_json(&model);
    assert_eq!(json["variant"], "bipolar");
    for row in json["matrix"].as_array().unwrap() {
        assert!(row.as_str().unwrap().split(' ').all(|c| ["-1", "0", "1", "2"].contains(&c)));
    }
}

#[test]
fn empty_input_and_unseen_values() {
    let dir = TempDir::new().unwrap();
    let model = voting_model(&dir, "base");
    let header = fs::read_to_string(data("voting.csv")).unwrap().lines().next().unwrap().to_string();

    let empty = dir.path().join("empty.csv");
    fs::write(&empty, format!("{header}\n")).unwrap();
    let o = run(&["predict", "--model", path(&model), "--data", path(&empty)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "");

    let odd = dir.path().join("odd.csv");
    let cells = header.split(',').count();
    let row = vec!["maybe"; cells].join(",");
    fs::write(&odd, format!("{header}\n{row}\n")).unwrap();
    let o = run(&["predict", "--model", path(&model), "--data", path(&odd)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    // no atom holds, so the target stands unattacked
    assert_eq!(stdout(&o), "0,true\n");
}

#[test]
fn explain_dispatches_on_the_verdict() {
    let dir = TempDir::new().unwrap();
    let model = voting_model(&dir, "base");
    let preds = run(&["predict", "--model", path(&model), "--data", path(&data("voting.csv")), "--format", "json"]);
    let preds: Value = serde_json::from_str(&stdout(&preds)).unwrap();
    let preds: Vec<bool> = preds["predictions"].as_array().unwrap().iter().map(|v| v.as_bool().unwrap()).collect();
    for verdict in [true, false] {
        let row = preds.iter().position(|&p| p == verdict).unwrap().to_string();
        let o = run(&["explain", "--model", path(&model), "--data", path(&data("voting.csv")), "--row", &row, "--format", "json"]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let set: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(set["verdict"], if verdict { "accepted" } else { "rejected" });
        assert_eq!(set["members"][0]["role"], "topic");
        assert_eq!(set["members"][0]["name"], "class=democrat");
        let roles: Vec<&str> = set["members"].as_array().unwrap()[1..].iter().map(|m| m["role"].as_str().unwrap()).collect();
        let expected = if verdict { "defender" } else { "undefended_attacker" };
        assert!(roles.iter().all(|r| *r == expected));
        if !verdict {
            assert!(!roles.is_empty());
        }

        let o = run(&["explain", "--model", path(&model), "--data", path(&data("voting.csv")), "--row", &row]);
        let text = stdout(&o);
        assert!(text.starts_with("class=democrat: "));
        assert!(text.contains(if verdict { "accepted" } else { "rejected" }));
    }
}

#[test]
fn explain_dot_parses() {
    let dir = TempDir::new().unwrap();
    let model = voting_model(&dir, "base");
    let o = run(&["explain", "--model", path(&model), "--data", path(&data("voting.csv")), "--row", "0", "--format", "dot"]);
    assert!(o.status.success());
    let dot = stdout(&o);
    graphviz_rust::parse(&dot).expect("valid DOT");
    assert!(dot.contains("palegreen"));
}

#[test]
fn explain_inline_facts() {
    let dir = TempDir::new().unwrap();
    let model = voting_model(&dir, "base");
    let o = run(&["explain", "--model", path(&model), "--facts", "crime=n, el-salvador-aid=y", "--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let set: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(set["verdict"].is_string());

    let o = run(&["explain", "--model", path(&model), "--facts", "crime"]);
    assert_eq!(o.status.code(), Some(4));
    let o = run(&["explain", "--model", path(&model), "--facts", "no-such-vote=y"]);
    assert_eq!(o.status.code(), Some(4));
    let o = run(&["explain", "--model", path(&model), "--data", path(&data("voting.csv")), "--row", "9999"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn export_dot_and_edges() {
    let dir = TempDir::new().unwrap();
    let model = voting_model(&dir, "base");
    let o = run(&["export", "--model", path(&model)]);
    assert!(o.status.success());
    let dot = stdout(&o);
    graphviz_rust::parse(&dot).expect("valid DOT");
    let nodes = dot.lines().filter(|l| l.contains("[label=")).count();
    assert!((1..=34).contains(&nodes));

    let o = run(&["export", "--model", path(&model), "--format", "json"]);
    let edges: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let edge_count = model_json(&model)["training"]["edge_count"].as_u64().unwrap();
    assert_eq!(edges.as_array().unwrap().len() as u64, edge_count);
    assert_eq!(dot.matches("->").count() as u64, edge_count);
}

#[test]
fn eval_reports_are_reproducible() {
    let iris = data("iris.csv");
    let args = [
        "eval",
        "--data",
        path(&iris),
        "--positive-class",
        "Iris-versicolor",
        "--runs",
        "3",
        "--seed",
        "5",
        "--format",
        "json",
    ];
    let first = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, run(&args).stdout);
    let report: Value = serde_json::from_slice(&first.stdout).unwrap();
    let runs = report["runs"].as_array().unwrap();
    assert_eq!(runs.len(), 3);
    let seeds: Vec<u64> = runs.iter().map(|r| r["seed"].as_u64().unwrap()).collect();
    assert_eq!(seeds, vec![5, 6, 7]);
    let mean = runs.iter().map(|r| r["test_accuracy"].as_f64().unwrap()).sum::<f64>() / 3.0;
    assert_eq!(report["mean"].as_f64().unwrap(), mean);
    assert_eq!(report["config"]["variant"], "base");

    let single = run(&["eval", "--data", path(&data("iris.csv")), "--positive-class", "Iris-setosa", "--runs", "1", "--format", "json"]);
    let report: Value = serde_json::from_slice(&single.stdout).unwrap();
    assert!(report["std"].is_null());
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("missing.csv");
    let o = run(&["learn", "--data", path(&missing), "--positive-class", "x"]);
    assert_eq!(o.status.code(), Some(3));

    let o = run(&["learn", "--data", path(&data("voting.csv")), "--positive-class", "democrat", "--iterations", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["learn", "--data", path(&data("voting.csv")), "--positive-class", "whig"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["eval", "--data", path(&data("voting.csv")), "--positive-class", "democrat", "--runs", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["learn", "--data", path(&data("voting.csv")), "--positive-class", "democrat", "--variant", "tripolar"]);
    assert_eq!(o.status.code(), Some(2));

    let model = voting_model(&dir, "base");
    let o = run(&["predict", "--model", path(&model), "--data", path(&data("iris.csv"))]);
    assert_eq!(o.status.code(), Some(4));

    let broken = dir.path().join("broken.json");
    fs::write(&broken, "{ not json").unwrap();
    let o = run(&["export", "--model", path(&broken)]);
    assert_eq!(o.status.code(), Some(4));
}
