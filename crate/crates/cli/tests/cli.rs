use std::path::Path;
use std::process::{Command, Output};

use renormlab_cli::CSV_COLUMNS;
use serde_json::Value;

fn renormlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_renormlab"))
        .args(args)
        .env_remove("RENORMLAB_PRECISION_GUARD")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn survey(dir: &Path, corpus: &str, extra: &[&str]) -> Output {
    let file = dir.join("corpus.txt");
    std::fs::write(&file, corpus).unwrap();
    let mut args = vec!["survey", file.to_str().unwrap(), "--out", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    renormlab(&args)
}

#[test]
fn exit_codes() {
    assert_eq!(renormlab(&["--help"]).status.code(), Some(0));
    assert_eq!(renormlab(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(renormlab(&["nest"]).status.code(), Some(1));
    assert_eq!(renormlab(&["survey", "/nonexistent/corpus.txt"]).status.code(), Some(2));
}

#[test]
fn pipeline_golden_mean() {
    let v = json(&renormlab(&["pipeline", "-1"]));
    assert_eq!(v["immediately_renormalizable"], true);
    assert_eq!(v["p_e"], 2);
    let sigma = v["sigma"].as_f64().unwrap();
    assert!((sigma - 0.381966).abs() < 1e-6, "{sigma}");
}

#[test]
fn attracting_alpha_is_a_note() {
    let out = renormlab(&["pipeline", "-0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["notes"][0]["kind"], "AlphaAttracting");
    assert!(v["nest"].is_null());
}

#[test]
fn typed_errors_are_data() {
    let v = json(&renormlab(&["tower", "-0.5"]));
    assert_eq!(v["error"]["kind"], "AlphaAttracting");
}

#[test]
fn find_param_period_three() {
    let v = json(&renormlab(&["find-param", "superattracting", "--q", "3"]));
    assert!((v["c"].as_f64().unwrap() + 1.754878).abs() < 1e-6);
    let v = json(&renormlab(&["find-param", "period-doubling", "--n", "1"]));
    assert_eq!(v["c"].as_f64().unwrap(), -1.0);
}

#[test]
fn empty_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let out = survey(dir.path(), "# nothing here\n\n", &[]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("survey.csv")).unwrap();
    assert_eq!(csv, format!("# schema=1\n{}\n", CSV_COLUMNS.join(",")));
    assert!(!dir.path().join("survey.svg").exists());
}

#[test]
fn two_entries_in_input_order() {
    let dir = tempfile::tempdir().unwrap();
    let out = survey(dir.path(), "-1.3107026413368328 ladder2\n-1 golden\n", &["--grid", "100"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("survey.csv")).unwrap();
    let labels: Vec<&str> = csv
        .lines()
        .skip(2)
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(labels, ["ladder2", "golden"]);
    let footer: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("survey.json")).unwrap()).unwrap();
    assert_eq!(footer["rows"], 2);
    assert!(std::fs::read_to_string(dir.path().join("survey.svg"))
        .unwrap()
        .starts_with("<svg"));
}

#[test]
fn malformed_corpus_line_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let out = survey(dir.path(), "-1 ok\n# c\nnot-a-number\n", &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn identical_config_identical_bytes() {
    let a = renormlab(&["contraction", "-1.3107026413368328", "--samples", "20", "--seed", "9"]);
    let b = renormlab(&["contraction", "-1.3107026413368328", "--samples", "20", "--seed", "9"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = renormlab(&["contraction", "-1.3107026413368328", "--samples", "20", "--seed", "10"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn precision_guard_from_env() {
    let run = |guard: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_renormlab"));
        cmd.args(["pipeline", "-1.9", "--depth", "1", "--grid", "50"]);
        match guard {
            Some(g) => cmd.env("RENORMLAB_PRECISION_GUARD", g),
            None => cmd.env_remove("RENORMLAB_PRECISION_GUARD"),
        };
        cmd.output().unwrap()
    };
    let v = json(&run(Some("1e-2")));
    assert_eq!(v["config"]["precision_guard"], 1e-2);
    let coarse = v["nest"]["levels"].as_u64().unwrap();
    let fine = json(&run(None))["nest"]["levels"].as_u64().unwrap();
    assert!(coarse < fine, "{coarse} {fine}");
    assert_eq!(run(Some("abc")).status.code(), Some(1));
}
