use std::io::Write;
use std::process::{Command, Output};

use monozeta::algebra::MotRat;
use monozeta::motivic::zeta_motivic;
use monozeta::topological::{zeta_top, RatQsDoc};
use monozeta::SemigroupData;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monozeta"))
        .args(args)
        .env_remove("MONOZETA_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn invariants_json() {
    let v = json(&["invariants", "--gens", "4,6,13", "--json"]);
    assert_eq!(v["lct"], "4/3");
    assert_eq!(v["pairs"][0]["N"], 6);
    assert_eq!(v["pairs"][1]["nu"], 37);
    let values: Vec<&str> = v["poles"].as_array().unwrap().iter().map(|p| p["value"].as_str().unwrap()).collect();
    assert_eq!(values, ["-2", "-37/26", "-4/3"]);
    assert_eq!(v["poles"][2]["residue"], "8/3");
    assert_eq!(v["semigroup"]["n0"], 3);
}

#[test]
fn input_file_matches_gens_flag() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, r#"{{"generators": [8, 12, 26, 53]}}"#).unwrap();
    let path = file.path().to_str().unwrap();
    let from_file = run(&["topo", "--input", path]);
    let from_flag = run(&["topo", "--gens", "8,12,26,53"]);
    assert!(from_file.status.success());
    assert_eq!(stdout(&from_file), stdout(&from_flag));
    assert_eq!(
        stdout(&from_flag).trim(),
        "2(14176s^3 + 103282s^2 + 246789s + 193875) / ((3 + s)(11 + 6s)(50 + 26s)(235 + 106s))"
    );
}

#[test]
fn topo_json_round_trips() {
    let v = json(&["topo", "--gens", "4,6,13", "--format", "json"]);
    let doc: RatQsDoc = serde_json::from_value(v["zeta"].clone()).unwrap();
    let s: SemigroupData = "4,6,13".parse().unwrap();
    assert_eq!(doc, RatQsDoc::from(&zeta_top(&s)));
    assert_eq!(v["zeta"]["den"][0], serde_json::json!([2, 1]));
}

#[test]
fn motivic_json_round_trips() {
    for local in [false, true] {
        let mut args = vec!["motivic", "--gens", "4,6,13", "--json"];
        if local {
            args.push("--local");
        }
        let v = json(&args);
        let z: MotRat = serde_json::from_value(v["zeta"].clone()).unwrap();
        let s: SemigroupData = "4,6,13".parse().unwrap();
        assert_eq!(&z, zeta_motivic(&s).total(local));
    }
}

#[test]
fn latex_output() {
    let out = run(&["topo", "--gens", "2,3", "--latex"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("\\frac"));
}

#[test]
fn count_reports_match() {
    let v = json(&["count", "--gens", "2,3", "--m", "3", "--q", "7", "--json"]);
    assert_eq!(v["count"], "4459");
    assert_eq!(v["match"], true);
    let v = json(&["count", "--gens", "4,6,13", "--m", "2", "--q", "5", "--local", "--json"]);
    assert_eq!(v["match"], true);
    assert_eq!(v["local"], true);
}

#[test]
fn budget_exhaustion_is_an_error() {
    let out = run(&["count", "--gens", "2,3", "--m", "6", "--q", "11", "--budget", "1000"]);
    assert_eq!(out.status.code(), Some(1));
    let out = Command::new(env!("CARGO_BIN_EXE_monozeta"))
        .args(["count", "--gens", "2,3", "--m", "6", "--q", "11"])
        .env("MONOZETA_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn invalid_input_exits_with_one() {
    let out = run(&["invariants", "--gens", "4,6,12"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("gcd"), "{err}");
    assert_eq!(run(&["invariants"]).status.code(), Some(1));
    assert_eq!(run(&["invariants", "--gens", "4,x,13"]).status.code(), Some(1));
    assert_eq!(run(&["count", "--gens", "2,3", "--m", "1", "--q", "3"]).status.code(), Some(1));
    assert_eq!(run(&["jets", "--gens", "2,3", "--m", "0"]).status.code(), Some(1));
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, "[4, 6, 13]").unwrap();
    let out = run(&["invariants", "--input", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn jets_and_flatness() {
    let v = json(&["jets", "--gens", "4,6,13", "--m", "12", "--json"]);
    assert_eq!(v, serde_json::json!([{"kind": "B", "codim": 18}, {"kind": "C", "k": 1, "codim": 19}]));
    let v = json(&["flatness", "--gens", "4,6,13", "--json"]);
    assert_eq!(v["m0"], 36);
    let v = json(&["flatness", "--gens", "2,3", "--json"]);
    assert_eq!(v["verdict"], "hypersurface_flat");
}

#[test]
fn series_check_passes() {
    let v = json(&["series-check", "--gens", "4,6,13", "--order", "40", "--json"]);
    assert_eq!(v["global"], true);
    assert_eq!(v["local"], true);
    let out = run(&["series-check", "--gens", "2,3"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn random_is_deterministic() {
    let a = run(&["random", "--g", "3", "--seed", "42", "--count", "5"]);
    let b = run(&["random", "--g", "3", "--seed", "42", "--count", "5"]);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    for line in stdout(&a).lines() {
        let gens = line.trim_matches(|c| c == '(' || c == ')');
        assert_eq!(run(&["invariants", "--gens", gens]).status.code(), Some(0), "{line}");
    }
}

#[test]
fn verify_all_on_the_cusp() {
    let v = json(&["verify-all", "--gens", "2,3", "--json"]);
    assert_eq!(v["ok"], true);
    let out = run(&["verify-all", "--gens", "4,6,13"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}
