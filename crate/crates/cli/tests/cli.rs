use std::process::{Command, Output};

use clap::Parser;
use diagcount_cli::{run, Cli, EXIT_USAGE};
use serde_json::Value;

fn diagcount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diagcount"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let out = diagcount(args);
    let v: Value = serde_json::from_slice(&out.stdout).expect("valid json");
    let code = out.status.code().expect("exit code");
    assert_eq!(v["exit_code"], code);
    (v, code)
}

#[test]
fn count_methods() {
    let (v, code) = json(&["count", "--n", "2", "--p", "2", "--k", "2", "--method", "brute"]);
    assert_eq!((code, &v["payload"]["count"]), (0, &Value::from("112")));
    let (v, _) = json(&["count", "--n", "3", "--p", "2", "--k", "1", "--method", "closed"]);
    assert_eq!(v["payload"]["count"], "58");
    for method in ["engine", "semidirect", "closed"] {
        let (v, _) = json(&["count", "--n", "4", "--p", "2", "--k", "2", "--method", method]);
        assert_eq!(v["payload"]["count"], "10958404", "{method}");
    }
}

#[test]
fn usage_errors_exit_2() {
    let (v, code) = json(&["count", "--n", "2", "--p", "4", "--k", "1"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(v["payload"]["error"].as_str().unwrap().contains("p must be prime"));
    let (_, code) = json(&["count", "--n", "5", "--p", "2", "--k", "1", "--method", "closed"]);
    assert_eq!(code, EXIT_USAGE);
    let (_, code) = json(&["graph", "--modulus", "8", "--entries", "0,1,1"]);
    assert_eq!(code, EXIT_USAGE);
    let (_, code) = json(&["verify", "--n", "2", "--p", "6", "--k", "1"]);
    assert_eq!(code, EXIT_USAGE);
    let (_, code) = json(&["classes", "--g", "9"]);
    assert_eq!(code, EXIT_USAGE);
    assert_eq!(diagcount(&["count", "--n", "x"]).status.code(), Some(EXIT_USAGE));
}

#[test]
fn types_table() {
    let (v, _) = json(&["types", "--n", "2", "--p", "2", "--k", "2", "--out", "json"]);
    assert_eq!(v["payload"]["rows"].as_array().unwrap().len(), 3);
    assert_eq!(v["payload"]["total"]["contribution"], "112");

    let (v, _) = json(&["types", "--n", "3", "--p", "2", "--k", "1", "--out", "json"]);
    let rows = v["payload"]["rows"].as_array().unwrap();
    assert!(rows.iter().any(|r| r["partition"] == "1+1+1" && r["t"] == "0"));

    let (v, _) = json(&["types", "--n", "4", "--p", "2", "--k", "2", "--out", "json"]);
    // 1 + k + k rows with at most two values, k + 2C(k,2) with three, k + 3C(k,2) + 2C(k,3) with four
    assert_eq!(v["payload"]["rows"].as_array().unwrap().len(), 14);

    let out = diagcount(&["types", "--n", "2", "--p", "2", "--k", "2", "--out", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "partition,weights,t,c,s,contribution,canonical");
    assert_eq!(lines.last().unwrap(), &"total,,10,,,112,");
}

#[test]
fn graph_command() {
    let (v, _) = json(&["graph", "--modulus", "27", "--entries", "0,1,2,4,5,11"]);
    assert_eq!(v["payload"]["aut"], "4");
    assert_eq!(v["payload"]["classes"], "78732");
    assert_eq!(v["payload"]["cells"].as_array().unwrap().len(), 4);
    let (v, _) = json(&["graph", "--modulus", "4", "--entries", "0,1", "--dot"]);
    assert_eq!(v["payload"]["classes"], "4");
    assert!(v["payload"]["dot"].as_str().unwrap().starts_with("graph"));
}

#[test]
fn classes_command() {
    for (g, a) in [("2", "1"), ("4", "6"), ("5", "20")] {
        let (v, _) = json(&["classes", "--g", g]);
        assert_eq!(v["payload"]["a_g"], a);
    }
}

#[test]
fn verify_command() {
    let (v, code) = json(&["verify", "--n", "2", "--p", "2", "--k", "2"]);
    assert_eq!(code, 0);
    let checks = v["payload"]["checks"].as_array().unwrap();
    for name in ["engine = semidirect", "engine = closed", "engine = brute"] {
        let c = checks.iter().find(|c| c["check"] == name).unwrap();
        assert_eq!((&c["left"], &c["right"]), (&Value::from("112"), &Value::from("112")));
    }
    let (_, code) = json(&["verify", "--n", "3", "--p", "2", "--k", "1"]);
    assert_eq!(code, 0);
}

#[test]
fn proportion_command() {
    let (v, _) = json(&["proportion", "--n", "2", "--k", "2", "--primes", "2,3,5"]);
    let ratios: Vec<&str> = v["payload"]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["ratio"].as_str().unwrap())
        .collect();
    assert_eq!(ratios, ["7/16", "337/729", "7561/15625"]);
    assert_eq!(v["payload"]["target"], "1/2");
    let (v, _) = json(&["proportion", "--n", "1", "--k", "1", "--primes", "2"]);
    assert_eq!(v["payload"]["rows"][0]["ratio"], "1");
    let (v, _) = json(&["proportion", "--n", "3", "--k", "1", "--primes", "3,5,7"]);
    let d: Vec<f64> = v["payload"]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["decimal"].as_str().unwrap().parse().unwrap())
        .collect();
    assert!(d.windows(2).all(|w| w[0] < w[1] && w[1] < 1.0 / 6.0));
}

#[test]
fn demos() {
    let (v, code) = json(&["demo", "z6"]);
    assert_eq!((code, &v["payload"]["holds"]), (0, &Value::Bool(true)));
    assert_eq!(v["payload"]["z4_similar_diagonal_pairs"], Value::Array(vec![]));
    let (_, code) = json(&["demo", "jordan"]);
    assert_eq!(code, 0);
}

#[test]
fn output_is_deterministic() {
    let args = ["types", "--n", "4", "--p", "3", "--k", "2", "--out", "csv"];
    let a = diagcount(&args).stdout;
    let b = Command::new(env!("CARGO_BIN_EXE_diagcount"))
        .args(args)
        .env("DIAGCOUNT_THREADS", "3")
        .output()
        .unwrap()
        .stdout;
    assert_eq!(a, b);
}

#[test]
fn text_format() {
    let out = diagcount(&["count", "--n", "2", "--p", "3", "--k", "2", "--format", "text"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("count: 3033"));
}

#[test]
fn library_entry_point() {
    let cli = Cli::try_parse_from(["diagcount", "count", "--n", "2", "--p", "5", "--k", "1"]).unwrap();
    let r = run(&cli);
    assert_eq!(r.exit_code, 0);
    assert_eq!(r.payload["count"], "305");
    assert_eq!(r.to_json()["command"], "count");
}
