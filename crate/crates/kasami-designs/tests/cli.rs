//! End-to-end checks of the command-line surface: exit codes, JSON schemas,
//! file artifacts, and reproducibility.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kasami-designs"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("kasami_cli_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn inspect_prints_the_context_summary() {
    let out = run(&["inspect", "-p", "3", "-s", "2", "-l", "1"]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["p"], 3);
    assert_eq!(doc["q"], 81);
    assert_eq!(doc["n"], 80);
    assert_eq!(doc["case"], "OddD");
    assert_eq!(doc["dprime"], 1);
    assert_eq!(doc["primitive_poly"].as_array().unwrap().len(), 5);

    let out = run(&["inspect", "-p", "3", "-s", "3", "-l", "1"]);
    assert_eq!(stdout_json(&out)["case"], "TwoD");
}

#[test]
fn invalid_parameters_exit_2_with_a_diagnostic() {
    let out = run(&["inspect", "-p", "3", "-s", "2", "-l", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("l must differ from s"), "stderr: {err}");

    let out = run(&["inspect", "-p", "4", "-s", "2", "-l", "1"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["inspect", "-p", "3", "-s", "5", "-l", "1"]);
    assert_eq!(out.status.code(), Some(2)); // beyond the q envelope

    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["--help"]);
    assert!(out.status.success());
}

#[test]
fn compare_matches_at_the_gold_triple() {
    for what in ["values", "weights", "designs"] {
        let out = run(&["compare", "-p", "3", "-s", "2", "-l", "1", "--what", what]);
        assert!(out.status.success(), "compare --what {what}");
        let doc = stdout_json(&out);
        assert_eq!(doc["match"], true);
        assert_eq!(doc["diffs"].as_array().unwrap().len(), 0);
    }
}

#[test]
fn weight_dist_methods_agree_and_embed_provenance() {
    let mut docs = Vec::new();
    for method in ["enumerate", "sums", "closed-form"] {
        let out = run(&[
            "weight-dist", "-p", "3", "-s", "2", "-l", "1", "--method", method,
        ]);
        assert!(out.status.success(), "method {method}");
        let doc = stdout_json(&out);
        assert_eq!(doc["total"], 177147);
        assert_eq!(doc["config"]["method"], method);
        assert!(doc["primitive_poly"].is_array());
        docs.push(doc);
    }
    assert_eq!(docs[0]["weights"], docs[1]["weights"]);
    assert_eq!(docs[0]["weights"], docs[2]["weights"]);
    // Example 1 spot value: weight 45 has 6840 codewords.
    let w45 = docs[0]["weights"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["w"] == 45)
        .unwrap();
    assert_eq!(w45["count"], 6840);
}

#[test]
fn enumeration_budget_refusal_and_override() {
    let out = run(&[
        "weight-dist", "-p", "3", "-s", "4", "-l", "1", "--method", "enumerate",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("budget"), "stderr: {err}");
    assert!(err.contains("sums"), "stderr should point at the sums path");

    let out = bin()
        .args(["weight-dist", "-p", "3", "-s", "2", "-l", "1", "--method", "enumerate"])
        .env("KDF_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "tightened budget must refuse");

    let out = bin()
        .args(["weight-dist", "-p", "3", "-s", "2", "-l", "1", "--method", "enumerate"])
        .env("KDF_BUDGET", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn value_dist_csv_and_json_forms() {
    let out = run(&["value-dist", "-p", "3", "-s", "2", "-l", "1", "--csv"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("coeffs,pretty,count\n"));
    assert!(text.contains("14480")); // the zero value row

    let out = run(&["value-dist", "-p", "3", "-s", "2", "-l", "1"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["total"], 59049);
    let entries = doc["entries"].as_array().unwrap();
    // sorted by descending count; the zero value dominates
    assert_eq!(entries[0]["count"], 14480);
    assert_eq!(entries[0]["pretty"], "0");
}

#[test]
fn predict_designs_lists_the_expected_pairs() {
    let out = run(&["predict", "-p", "3", "-s", "2", "-l", "1", "--what", "designs"]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    let designs = doc["designs"].as_array().unwrap();
    assert_eq!(designs.len(), 8);
    let d72 = designs.iter().find(|d| d["k"] == 72).unwrap();
    assert_eq!(d72["lambda"], 71);
    assert_eq!(d72["b"], 90);
}

#[test]
fn check_affine_passes_at_gold() {
    let out = run(&[
        "check-affine", "-p", "3", "-s", "2", "-l", "1", "--trials", "25", "--seed", "7",
    ]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["structural"], true);
    assert_eq!(doc["empirical_trials"], 25);
    assert_eq!(doc["empirical_pass"], 25);
}

#[test]
fn extract_then_verify_design_round_trip() {
    let path = tmp("w72.blocks");
    let out = run(&[
        "extract-design", "-p", "3", "-s", "2", "-l", "1",
        "--weight", "72", "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["b"], 90);
    assert_eq!(doc["lambda"], 71);

    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("81 72 90 71\n"));
    assert_eq!(text.lines().count(), 91);

    let out = run(&["verify-design", "--in", path.to_str().unwrap()]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["mode"], "full");
    assert_eq!(doc["lambda_verified"], 71);
    assert_eq!(doc["match"], true);

    let out = run(&[
        "verify-design", "--in", path.to_str().unwrap(), "--sampled", "30", "--seed", "5",
    ]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["mode"], "sampled");
    assert_eq!(doc["match"], true);

    // A corrupted file must fail verification with exit 1.
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    lines[1] = lines[2].clone(); // duplicate one block, dropping another
    let bad = tmp("w72_bad.blocks");
    std::fs::write(&bad, lines.join("\n") + "\n").unwrap();
    let out = run(&["verify-design", "--in", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = tmp("idem_a.json");
    let b = tmp("idem_b.json");
    for path in [&a, &b] {
        let out = run(&[
            "value-dist", "-p", "3", "-s", "2", "-l", "1",
            "--output", path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let (ta, tb) = (
        std::fs::read_to_string(&a).unwrap(),
        std::fs::read_to_string(&b).unwrap(),
    );
    // Outputs embed their own path in the config; same path would be truly
    // identical, different paths differ only on that line.
    let scrub = |t: &str| {
        t.lines()
            .filter(|l| !l.contains("\"output\""))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(scrub(&ta), scrub(&tb));

    let c = tmp("idem_c.json");
    for _ in 0..2 {
        let out = run(&[
            "weight-dist", "-p", "3", "-s", "2", "-l", "1", "--method", "sums",
            "--output", c.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    // identical invocation twice: the file is byte-stable
    let first = std::fs::read(&c).unwrap();
    let out = run(&[
        "weight-dist", "-p", "3", "-s", "2", "-l", "1", "--method", "sums",
        "--output", c.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(first, std::fs::read(&c).unwrap());
}
