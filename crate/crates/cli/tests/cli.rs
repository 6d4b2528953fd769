use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ruling-sim"))
        .args(args)
        .env_remove("RULING_SIM_LOG")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn p(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

fn edge_count(path: &Path) -> usize {
    let text = std::fs::read_to_string(path).unwrap();
    text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')).count() - 1
}

#[test]
fn gen_tree_writes_n_minus_one_edges() {
    let dir = TempDir::new().unwrap();
    let out = bin(&["gen", "--family", "tree", "--n", "1000", "--seed", "1", "--out", &p(&dir, "t.el")]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(edge_count(&dir.path().join("t.el")), 999);
    assert!(String::from_utf8_lossy(&out.stdout).contains("m=999"));
}

#[test]
fn gen_girth7_is_certified() {
    let dir = TempDir::new().unwrap();
    let out = bin(&[
        "gen", "--family", "girth7", "--n", "5000", "--target-degree", "8", "--seed", "2", "--out", &p(&dir, "g.el"),
    ]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("girth>=7: true"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&bin(&["gen", "--family", "tree", "--n", "0", "--seed", "1"])), 2);
    // seeds are mandatory
    assert_eq!(code(&bin(&["gen", "--family", "tree", "--n", "10"])), 2);
    assert_eq!(code(&bin(&["gen", "--family", "girth7", "--n", "10", "--seed", "1"])), 2);
    assert_eq!(code(&bin(&["run", "--graph", "/nonexistent.el", "--seed", "1"])), 2);
    assert_eq!(code(&bin(&["bogus"])), 2);
}

#[test]
fn run_then_verify() {
    let dir = TempDir::new().unwrap();
    let graph = p(&dir, "t.el");
    assert_eq!(code(&bin(&["gen", "--family", "tree", "--n", "3000", "--seed", "4", "--out", &graph])), 0);
    let result = p(&dir, "r.json");
    let trace = p(&dir, "trace.jsonl");
    let out = bin(&["run", "--graph", &graph, "--seed", "9", "--out", &result, "--trace", &trace]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&result).unwrap()).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert!(doc["beta_measured"].as_f64().unwrap() <= 2.0);
    let phases = doc["phases"].as_array().unwrap();
    let total: u64 = phases.iter().map(|ph| ph["rounds"].as_u64().unwrap()).sum();
    assert_eq!(total, doc["rounds_total"].as_u64().unwrap());
    let lines = std::fs::read_to_string(&trace).unwrap();
    assert_eq!(lines.lines().count(), phases.len());
    for line in lines.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        for key in ["phase", "rounds", "|S|", "|W|", "max_alive_degree"] {
            assert!(v.get(key).is_some(), "{key} missing in {line}");
        }
    }

    assert_eq!(code(&bin(&["verify", "--graph", &graph, "--set", &result, "--beta", "2"])), 0);
    // the set is not 0-dominating
    assert_eq!(code(&bin(&["verify", "--graph", &graph, "--set", &result, "--beta", "0"])), 1);
    assert_eq!(code(&bin(&["verify", "--graph", &graph, "--set", "/nonexistent.json", "--beta", "2"])), 2);
}

#[test]
fn verify_rejects_a_dependent_set() {
    let dir = TempDir::new().unwrap();
    let graph = p(&dir, "p.el");
    assert_eq!(code(&bin(&["gen", "--family", "path", "--n", "3", "--seed", "0", "--out", &graph])), 0);
    let doc = serde_json::json!({
        "schema_version": 1, "algorithm": "manual", "seed": 0, "n": 3, "S": [0, 1],
        "beta_measured": 1.0, "beta_bound": 2, "rounds_total": 0, "phases": []
    });
    let set = p(&dir, "s.json");
    std::fs::write(&set, doc.to_string()).unwrap();
    let out = bin(&["verify", "--graph", &graph, "--set", &set, "--beta", "2"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("independent: FAIL"));
}

#[test]
fn tree_pipeline_rejects_cycles() {
    let dir = TempDir::new().unwrap();
    let graph = p(&dir, "g.el");
    assert_eq!(
        code(&bin(&["gen", "--family", "girth7", "--n", "3000", "--target-degree", "4", "--seed", "1", "--out", &graph])),
        0
    );
    assert_eq!(code(&bin(&["run", "--graph", &graph, "--seed", "1"])), 2);
    let out = bin(&["run", "--graph", &graph, "--seed", "1", "--algorithm", "girth2rs", "--cleanup", "exact_mis"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = bin(&["run", "--graph", &graph, "--seed", "1", "--algorithm", "girth_relaxed_rs"]);
    assert_eq!(code(&out), 0);
    assert_eq!(code(&bin(&["run", "--graph", &graph, "--seed", "1", "--algorithm", "nope"])), 2);
}

#[test]
fn runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let graph = p(&dir, "t.el");
    let again = p(&dir, "t2.el");
    bin(&["gen", "--family", "tree", "--n", "2000", "--seed", "5", "--out", &graph]);
    bin(&["gen", "--family", "tree", "--n", "2000", "--seed", "5", "--out", &again]);
    assert_eq!(std::fs::read(&graph).unwrap(), std::fs::read(&again).unwrap());
    let (a, b) = (p(&dir, "a.json"), p(&dir, "b.json"));
    bin(&["run", "--graph", &graph, "--seed", "3", "--mis-cutoff", "2", "--out", &a]);
    bin(&["--jobs", "2", "run", "--graph", &graph, "--seed", "3", "--mis-cutoff", "2", "--out", &b]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn mc_conditional_prob_near_one_seventh() {
    let dir = TempDir::new().unwrap();
    let csv = p(&dir, "mc.csv");
    let out = bin(&["mc", "--lemma", "conditional-prob", "--k", "2", "--l", "3", "--samples", "200000", "--seed", "1", "--out", &csv]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let estimate: f64 = row[5].parse().unwrap();
    assert!((estimate - 1.0 / 7.0).abs() < 0.005);
    assert_eq!(row[6], "0.142857143");
    assert_eq!(code(&bin(&["mc", "--lemma", "min-cdf", "--samples", "10", "--seed", "1"])), 2);
}

#[test]
fn scale_emits_csv_deterministically() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (p(&dir, "a.csv"), p(&dir, "b.csv"));
    let args = |out: &str| {
        vec!["scale", "--family", "tree", "--n", "1024..4096", "--trials", "3", "--seed", "8", "--out"]
            .into_iter()
            .map(String::from)
            .chain([out.to_string()])
            .collect::<Vec<_>>()
    };
    let run = |out: &str| bin(&args(out).iter().map(String::as_str).collect::<Vec<_>>());
    let first = run(&a);
    assert_eq!(code(&first), 0, "{}", String::from_utf8_lossy(&first.stderr));
    assert!(String::from_utf8_lossy(&first.stderr).contains("fit: rounds_total"));
    run(&b);
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert_eq!(text.lines().count(), 1 + 3 * 3);
}

#[test]
fn trace_logging_goes_to_stderr() {
    let dir = TempDir::new().unwrap();
    let graph = p(&dir, "t.el");
    bin(&["gen", "--family", "tree", "--n", "200", "--seed", "5", "--out", &graph]);
    let out = Command::new(env!("CARGO_BIN_EXE_ruling-sim"))
        .args(["run", "--graph", &graph, "--seed", "1", "--out", &p(&dir, "r.json")])
        .env("RULING_SIM_LOG", "trace")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("\"max_alive_degree\""));
}
