use std::{
  fs,
  path::PathBuf,
  process::{Command, Output},
};

use serde_json::Value;

fn reks(args: &[&str]) -> Output {
  reks_env(args, &[])
}

fn reks_env(args: &[&str], env: &[(&str, &str)]) -> Output {
  let mut c = Command::new(env!("CARGO_BIN_EXE_reks"));
  c.args(args).env_remove("REKS_MAX_DIM");
  for (k, v) in env {
    c.env(k, v);
  }
  c.output().expect("binary runs")
}

fn report(o: &Output) -> Value {
  serde_json::from_slice(&o.stdout).expect("json report")
}

fn scratch(name: &str, body: &str) -> PathBuf {
  let dir = std::env::temp_dir().join(format!("reks-cli-{}", std::process::id()));
  fs::create_dir_all(&dir).unwrap();
  let p = dir.join(name);
  fs::write(&p, body).unwrap();
  p
}

#[test]
fn certificate_smashed_with_sign_circle() {
  let o = reks(&["bounds", "--cert", "rho0", "--smash", "S11"]);
  assert_eq!(o.status.code(), Some(0));
  let r = report(&o);
  assert_eq!(r["results"][0]["rho"], "(-1,0)");
  assert_eq!(r["results"][0]["certificate"]["rho"][0]["value"], -1);
  assert_eq!(r["results"][0]["certificate"]["rho"][1]["value"], 0);
}

#[test]
fn dt_linearity_preset_passes() {
  let o = reks(&["verify", "dt-linearity", "--preset", "z4neg-s11-freeorbit"]);
  assert_eq!(o.status.code(), Some(0));
  let r = report(&o);
  assert_eq!(r["pass"], true);
  assert!(r["results"][0]["checks"].as_u64().unwrap() > 0);
}

#[test]
fn empty_input_set_is_a_schema_error() {
  let p = scratch("empty.json", "[]");
  for args in
    [vec!["conn", "--input", p.to_str().unwrap()], vec!["bredon"], vec!["verify", "dt-conn"]]
  {
    let o = reks(&args);
    assert_eq!(o.status.code(), Some(2), "{args:?}");
    assert_eq!(report(&o)["kind"], "schema");
  }
}

#[test]
fn schema_violations_exit_2() {
  let p = scratch("bad.json", r#"{"space": "S9"}"#);
  assert_eq!(reks(&["conn", "--input", p.to_str().unwrap()]).status.code(), Some(2));
  let p = scratch("broken.json", "{");
  assert_eq!(reks(&["conn", "--input", p.to_str().unwrap()]).status.code(), Some(2));
  assert_eq!(reks(&["verify", "dt-linearity", "--preset", "nope"]).status.code(), Some(2));
  assert_eq!(reks(&["verify", "frobnicate"]).status.code(), Some(2));
  assert_eq!(
    reks_env(&["bounds", "--cert", "rho0"], &[("REKS_MAX_DIM", "x")]).status.code(),
    Some(2)
  );
}

#[test]
fn failed_checks_exit_1_with_counterexamples() {
  let o = reks(&["verify", "swallow", "--bound", "0"]);
  assert_eq!(o.status.code(), Some(1));
  let r = report(&o);
  assert_eq!(r["pass"], false);
  assert!(!r["counterexamples"].as_array().unwrap().is_empty());
}

#[test]
fn fixed_seed_gives_identical_reports() {
  let args = ["verify", "dt-conn", "--count", "3", "--seed", "11"];
  let (a, b) = (reks(&args), reks(&args));
  assert_eq!(a.status.code(), Some(0));
  assert_eq!(a.stdout, b.stdout);
  assert_ne!(a.stdout, reks(&["verify", "dt-conn", "--count", "3", "--seed", "12"]).stdout);
}

#[test]
fn explicit_space_schema() {
  // one 2-cell glued to the basepoint: S^2 with trivial action
  let base = r#"{"cell": {"dim": 0, "idx": 0}, "surj": [0, 0]}"#;
  let body = format!(
    r#"{{"space": {{"cells": [[], [[{base}, {base}, {base}]]], "action": [[[0], [], [0]], [[0], [], [0]]]}}}}"#
  );
  let p = scratch("s2.json", &body);
  let r = report(&reks(&["conn", "--input", p.to_str().unwrap()]));
  assert_eq!(r["results"][0]["conn"][0]["value"], 1);
  assert_eq!(r["results"][0]["conn"][1]["value"], 1);
}

#[test]
fn wedge_to_product_connectivity() {
  let p = scratch("wp.json", r#"{"space": "S2", "j": {"trivial": 2}}"#);
  let r = report(&reks(&["conn", "--input", p.to_str().unwrap()]));
  let w = &r["results"][0]["wedge_to_product"];
  assert_eq!(w["j_size"], 2);
  assert_eq!(w["measured"][0]["value"], 3);
}

#[test]
fn bredon_of_the_sign_circle() {
  let p = scratch("bredon.json", r#"{"space": "S11", "coeff": "z"}"#);
  let r = report(&reks(&["bredon", "--input", p.to_str().unwrap()]));
  let fixed = &r["results"][0]["fixed_points"];
  // underlying H_1 = Z; on fixed points H_0 is the cokernel of the transfer Z -> Z
  assert_eq!(fixed[0]["homology"]["degrees"][1]["betti"], 1);
  assert_eq!(fixed[1]["homology"]["degrees"][0]["torsion"], serde_json::json!(["2"]));
}

#[test]
fn bound_calculators() {
  let p = scratch(
    "bounds.json",
    r#"[{"excision": {"e": [[2, 1], [3, 2]], "c": ["1/2", 0]}}, {"wedge": {"p": [2, 1], "v": [0, "inf"]}}]"#,
  );
  let r = report(&reks(&["bounds", "--input", p.to_str().unwrap()]));
  assert_eq!(r["results"][0]["excision"][0]["value"], 4);
  assert_eq!(r["results"][0]["excision"][1]["value"], 3);
  assert_eq!(r["results"][1]["wedge"]["theta"][1]["value"], "-inf");
  assert_eq!(r["results"][1]["wedge"]["unbounded"][0], 1);
}

#[test]
fn csv_and_out_file() {
  let out = std::env::temp_dir().join(format!("reks-cli-out-{}.csv", std::process::id()));
  let o = reks(&[
    "bounds",
    "--cert",
    "rho0",
    "--smash",
    "S11",
    "--format",
    "csv",
    "--out",
    out.to_str().unwrap(),
  ]);
  assert_eq!(o.status.code(), Some(0));
  assert!(o.stdout.is_empty());
  let text = fs::read_to_string(&out).unwrap();
  assert!(text.starts_with("key,value\n"));
  assert!(text.contains("results.0.rho,\"(-1,0)\"\n"));
}

#[test]
fn default_checks_pass() {
  let sym = scratch("sym.json", r#"[{"group": "C3"}, {"codiscrete": 2, "perm": [1, 0]}]"#);
  for args in [
    vec!["trace-conn"],
    vec!["verify", "sym", "--input", sym.to_str().unwrap()],
    vec!["verify", "split-ext"],
    vec!["s21", "enumerate"],
    vec!["s21", "verify-split"],
    vec!["verify", "swallow", "--max-k", "0", "--max-p", "1"],
  ] {
    let o = reks(&args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
  }
}

#[test]
fn truncation_from_environment() {
  let o =
    reks_env(&["verify", "dt-linearity", "--count", "2", "--dim", "9"], &[("REKS_MAX_DIM", "2")]);
  assert_eq!(o.status.code(), Some(0));
}
