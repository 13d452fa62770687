use std::process::{Command, Output};

use serde_json::Value;

use genwait::cli::report::{Report, SUMMARY_HEADER};

fn genwait(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genwait"))
        .args(args)
        .env_remove("GENWAIT_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn analyze_cyclic_two() {
    let out = genwait(&["analyze", "C2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["e"], "2");
    assert_eq!(r["exact"]["profile"]["d"], 1);
    assert_eq!(r["passed"], true);
}

#[test]
fn analyze_s4_profile() {
    let r = json(&genwait(&["analyze", "S4"]));
    let alpha = &r["exact"]["profile"]["alpha"];
    assert_eq!(alpha["2^1"], 1);
    assert_eq!(alpha["2^2"], 1);
    assert_eq!(alpha["3^1"], 1);
    assert_eq!(r["exact"]["profile"]["beta"], 0);
}

#[test]
fn analyze_a5_maximals() {
    let r = json(&genwait(&["analyze", "A5"]));
    let x = &r["exact"];
    assert_eq!(x["profile"]["d"], 2);
    assert_eq!(x["profile"]["beta"], 1);
    for (n, m) in [("5", 5), ("6", 6), ("10", 10)] {
        assert_eq!(x["maximals"][n]["m"], m);
        assert_eq!(x["maximals"][n]["type_b"], m);
        assert_eq!(x["maximals"][n]["type_a"], 0);
    }
    assert_eq!(x["maximals"].as_object().unwrap().len(), 3);
    assert_eq!(r["failed"], 0);
}

#[test]
fn report_round_trips() {
    let out = genwait(&["analyze", "D5", "--trials", "50"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let report: Report = serde_json::from_str(&text).unwrap();
    assert_eq!(report.to_json(), text);
    assert!(report.montecarlo.is_some());
}

#[test]
fn exit_codes() {
    let bad = genwait(&["analyze", "S5*X"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("column 4"));
    assert_eq!(genwait(&["analyze", "S7"]).status.code(), Some(3));
    assert_eq!(genwait(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(genwait(&["--help"]).status.code(), Some(0));
}

#[test]
fn montecarlo_only_skips_the_lattice() {
    let out = genwait(&["analyze", "S7", "--montecarlo-only", "--trials", "200"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert!(r["exact"].is_null());
    assert_eq!(r["order"], "5040");
    assert_eq!(r["montecarlo"]["trials"], 200);
}

#[test]
fn single_trial_has_no_stderr() {
    let r = json(&genwait(&["montecarlo", "S3", "--trials", "1"]));
    assert!(r["montecarlo"]["stderr"].is_null());
}

#[test]
fn seed_from_environment_and_flag() {
    let run = |env: Option<&str>, args: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_genwait"));
        c.args(["montecarlo", "S4", "--trials", "500"]).args(args);
        match env {
            Some(v) => c.env("GENWAIT_SEED", v),
            None => c.env_remove("GENWAIT_SEED"),
        };
        c.output().unwrap().stdout
    };
    let flag5 = run(None, &["--seed", "5"]);
    assert_eq!(run(Some("5"), &[]), flag5);
    assert_eq!(run(Some("9"), &["--seed", "5"]), flag5);
    assert_ne!(run(Some("9"), &[]), flag5);
}

#[test]
fn constants_eta() {
    let r = json(&genwait(&["constants", "eta", "--prime-bound", "1000000"]));
    let lo = r["interval"]["lower"].as_f64().unwrap();
    let hi = r["interval"]["upper"].as_f64().unwrap();
    assert!(lo <= 2.875065 && 2.875065 <= hi);
    let r = json(&genwait(&["constants", "gd", "--d", "1", "--k", "2", "--prime-bound", "5"]));
    assert!((r["value"].as_f64().unwrap() - 0.4).abs() < 1e-12);
}

#[test]
fn catalog_filter_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = genwait(&["catalog", "--filter", "S*", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    let lines: Vec<&str> = summary.lines().collect();
    assert_eq!(lines[0], SUMMARY_HEADER);
    let specs: Vec<&str> = lines[1..].iter().map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(specs, ["S3", "S4", "S5", "S6"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), summary);
    let reports = std::fs::read_dir(dir.path())
        .unwrap()
        .filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "json"))
        .count();
    assert_eq!(reports, 4);
}

#[test]
fn catalog_bad_filter() {
    assert_eq!(genwait(&["catalog", "--filter", "[S"]).status.code(), Some(2));
}
