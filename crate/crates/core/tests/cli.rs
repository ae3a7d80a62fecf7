use std::process::{Command, Output};

use krichever::cli::{KAPPA_GOLDEN, PSI_GOLDEN};
use krichever::genus::GenusTable;
use serde_json::Value;

fn krichever(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_krichever")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

#[test]
fn psi_and_kappa_match_golden_files() {
    let o = krichever(&["psi", "--order", "4", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), PSI_GOLDEN);
    let o = krichever(&["kappa", "--order", "4"]);
    assert_eq!(stdout(&o), KAPPA_GOLDEN);
}

#[test]
fn golden_files_hold_the_printed_values() {
    assert!(PSI_GOLDEN.contains("psi(CP_4) = 35/128*p1^4 - 15/16*p1^2*p2 + 3/4*p1*p3 + 3/8*p2^2 - 1/2*p4\n"));
    assert!(KAPPA_GOLDEN.contains("kappa(CP_4) = 35*CP1^4 - 60*CP1^2*CP2 + 20*CP1*CP3 + 10*CP2^2 - 4*CP4\n"));
    assert_eq!(PSI_GOLDEN.lines().count(), 4);
    assert_eq!(KAPPA_GOLDEN.lines().count(), 4);
}

#[test]
fn verify_krichever_ode_exits_zero() {
    let o = krichever(&["verify", "--suite", "krichever-ode", "--order", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "krichever-ode (order 10): pass\n");
}

#[test]
fn quotient_low_weights_are_free_of_rank_one() {
    let o = krichever(&["quotient", "--max-weight", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["config"]["max_weight"], 3);
    let weights = v["weights"].as_array().unwrap();
    assert_eq!(weights.len(), 3);
    for (k, w) in weights.iter().enumerate() {
        assert_eq!(w["n"], k + 1);
        assert_eq!(w["Indec"], serde_json::json!({"free": 1, "torsion": []}));
    }
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["psi", "--order", "0"][..],
        &["psi", "--order", "1000"],
        &["kappa", "--format", "xml"],
        &["verify"],
        &["verify", "--suite", "all", "--order", "2"],
        &["quotient", "--max-weight", "20"],
        &["no-such-command"],
    ] {
        let o = krichever(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = std::env::temp_dir().join(format!("krichever-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("kappa.json");
    let o = krichever(&["kappa", "--order", "5", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    let direct = stdout(&krichever(&["kappa", "--order", "5", "--format", "json"]));
    assert_eq!(written, direct);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn json_tables_round_trip_through_the_parser() {
    for cmd in ["psi", "kappa", "kappa-inv", "phi-kh"] {
        let text = stdout(&krichever(&[cmd, "--order", "6", "--format", "json"]));
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["command"], cmd);
        let table = GenusTable::from_json(&v["table"]).unwrap();
        assert_eq!(serde_json::to_value(table.to_json()).unwrap(), v["table"]);
    }
}

#[test]
fn output_is_deterministic_and_lf_only() {
    let args = ["reproduce-paper", "--order", "6", "--max-weight", "7", "--format", "json"];
    let a = krichever(&args);
    let b = krichever(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.contains(&b'\r'));
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["pass"], true);
}
