use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gkfermat")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn genus_prints_the_number() {
    let out = run(&["genus", "--g", "2", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "17");
    assert_eq!(String::from_utf8_lossy(&run(&["genus", "--g", "2", "--k", "3"]).stdout).trim(), "82");
}

#[test]
fn sylow_not_certified_with_witness() {
    let out = run(&["sylow-cert", "--g", "2", "--p", "83", "--r", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["conclusion"], "not-certified");
    assert_eq!(v["candidate_counts"], serde_json::json!([84]));

    let ok = run(&["sylow-cert", "--g", "2", "--p", "89"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["conclusion"], "unique");
}

#[test]
fn s_values_example() {
    let out = run(&["cover", "s-values", "--k", "2", "--p", "3", "--r", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["s_values"], serde_json::json!([0, 2]));
}

#[test]
fn exit_codes_for_bad_input_and_budget() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["genus", "--g", "1", "--k", "2"]).status.code(), Some(2));
    assert_eq!(run(&["cover", "kernel", "--k", "4", "--theta", "2,0,0,0"]).status.code(), Some(2));
    assert_eq!(run(&["curve", "verify", "--q", "13", "--lambdas", "3,3,6"]).status.code(), Some(2));
    assert_eq!(run(&["curve", "verify", "--q", "211", "--lambdas", "3,4,6"]).status.code(), Some(3));
    assert_eq!(run(&["cover", "fiber-check", "--g", "3", "--k", "3", "--budget", "500"]).status.code(), Some(3));
}

#[test]
fn curve_commands() {
    let fixed = run(&["curve", "fixed-points", "--q", "13", "--lambdas", "3,4,6"]);
    // a_2 has no rational fixed point over F_13, so the check is inconclusive
    assert_eq!(fixed.status.code(), Some(1));
    assert_eq!(json(&fixed)["conclusion"], "insufficient-rational-points");

    let free = run(&["curve", "free-subgroup", "--q", "17", "--lambdas", "2,5,10"]);
    assert_eq!(free.status.code(), Some(0));
    assert_eq!(json(&free)["acts_freely"], true);

    let a = run(&["curve", "case-a", "--mu", "2", "--c", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(json(&a)["primes"].as_array().unwrap().len(), 3);

    let b = run(&["curve", "case-b", "--q", "13", "--lambdas", "-1,2,-2"]);
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(json(&b)["alpha_squared"]["label"], "a_2");
}

#[test]
fn model_and_presentation_files() {
    let dir = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let model = dir.join("model.json");
    std::fs::write(&model, r#"{"g": 2, "q": 13, "lambdas": [3, 4, 6]}"#).unwrap();
    let out = run(&["curve", "verify", "--model", model.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["point_count"].as_u64().unwrap() > 0);

    let pres = dir.join("torus.json");
    std::fs::write(&pres, r#"{"label": "torus", "generator_count": 2, "relators": [[1, 2, -1, -2]]}"#).unwrap();
    let out = run(&["homology", "--presentation", pres.to_str().unwrap(), "--k", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["description"], "Z_5^2");
}

#[test]
fn output_is_deterministic() {
    let args = ["curve", "case-b", "--q", "17", "--lambdas", "16,2,15,3,14", "--seed", "9"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let table = run(&["cover", "closure", "--k", "2", "--p", "3", "--r", "3", "--l", "1,0", "--format", "table"]);
    let text = String::from_utf8(table.stdout).unwrap();
    assert!(text.lines().any(|l| l == "deck_order\t12"));
}
