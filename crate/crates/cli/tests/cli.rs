// Copyright 2026 The qwiretap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


use std::path::PathBuf;
use std::process::Command;

fn spec(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qwiretap")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{err}");
    out
}

fn value(csv: &str, kind: &str, key: &str) -> String {
    let prefix = format!("{kind},{key},");
    csv.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no row {kind},{key} in\n{csv}"))
        .to_string()
}

fn num(csv: &str, kind: &str, key: &str) -> f64 {
    value(csv, kind, key).parse().unwrap()
}

fn rows<'a>(csv: &'a str, kind: &str) -> Vec<&'a str> {
    let prefix = format!("{kind},");
    csv.lines().filter(|l| l.starts_with(&prefix)).collect()
}

#[test]
fn dmax_of_pure_against_mixed_is_one() {
    let p = spec("dmax_pair.toml");
    let out = ok(&["quantity", "--spec", p.to_str().unwrap(), "--name", "D_max", "--first", "0", "--second", "1"]);
    assert!((num(&out, "result", "D_max") - 1.0).abs() < 1e-9);
    assert!(out.starts_with("kind,key,value\n"));
}

#[test]
fn correlated_bit_mutual_information_is_one() {
    let p = spec("correlated_bit.toml");
    let out = ok(&["quantity", "--spec", p.to_str().unwrap(), "--name", "I", "--a", "U1", "--b", "Y"]);
    assert!((num(&out, "result", "I") - 1.0).abs() < 1e-9);
}

#[test]
fn theorem1_at_delta_eps_matches_corollary1() {
    let p = spec("toy_mawtc.toml");
    let s = p.to_str().unwrap();
    let a = ok(&["region", "--spec", s, "--name", "corollary1", "--param", "delta=0.1", "--param", "eps=0.1"]);
    let b = ok(&["region", "--spec", s, "--name", "theorem1", "--param", "delta=0.1", "--param", "eps=0.1"]);
    let (ca, cb) = (rows(&a, "constraint"), rows(&b, "constraint"));
    assert_eq!(ca.len(), cb.len());
    for (x, y) in ca.iter().zip(&cb) {
        let fx: f64 = x.rsplit(',').next().unwrap().parse().unwrap();
        let fy: f64 = y.rsplit(',').next().unwrap().parse().unwrap();
        assert!((fx - fy).abs() < 1e-10, "{x} vs {y}");
    }
}

#[test]
fn eq19_has_two_constraints() {
    let p = spec("toy_mawtc.toml");
    let out = ok(&["region", "--spec", p.to_str().unwrap(), "--name", "eq19"]);
    assert_eq!(rows(&out, "constraint").len(), 2);
}

#[test]
fn noiseless_asymptotic_region_reaches_one_one() {
    let p = spec("eve_silent_noiseless.toml");
    let out = ok(&["region", "--spec", p.to_str().unwrap(), "--name", "asymptotic"]);
    assert!(rows(&out, "corner").iter().any(|r| r.ends_with(",1;1")), "{out}");
}

#[test]
fn eve_silent_leakage_terms_vanish() {
    let p = spec("eve_silent_noiseless.toml");
    let out = ok(&["region", "--spec", p.to_str().unwrap(), "--name", "corollary1"]);
    let leak: Vec<_> = rows(&out, "term").into_iter().filter(|r| r.contains("_max(")).collect();
    assert!(!leak.is_empty());
    for r in leak {
        let v: f64 = r.rsplit(',').next().unwrap().parse().unwrap();
        assert!(v.abs() <= 1e-9, "{r}");
    }
    let sim = ok(&["simulate", "--spec", p.to_str().unwrap(), "--decoder", "leakage", "--trials", "20"]);
    assert_eq!(num(&sim, "result", "mean"), 0.0);
}

#[test]
fn orthogonal_simultaneous_decoding_is_error_free() {
    let p = spec("orthogonal_mawtc.toml");
    let out = ok(&[
        "simulate", "--spec", p.to_str().unwrap(), "--decoder", "simultaneous", "--test", "support",
        "--entries1", "0,0,1,1", "--entries2", "1,1,0,0",
    ]);
    assert!(num(&out, "result", "mean_error") <= 1e-9);
}

#[test]
fn convex_split_on_product_state_is_near_zero() {
    let p = spec("product_mawtc.toml");
    let out = ok(&["simulate", "--spec", p.to_str().unwrap(), "--decoder", "convex-split"]);
    for k in [1, 2, 4, 8] {
        assert!(num(&out, "result", &format!("{k}|distance")) <= 1e-6);
    }
}

#[test]
fn leakage_is_reproducible_and_written_to_file() {
    let p = spec("toy_mawtc.toml");
    let dir = tempfile::tempdir().unwrap();
    let f1 = dir.path().join("a.csv");
    let f2 = dir.path().join("b.csv");
    for f in [&f1, &f2] {
        ok(&[
            "--out", f.to_str().unwrap(), "simulate", "--spec", p.to_str().unwrap(), "--decoder", "leakage",
            "--seed", "42", "--trials", "50",
        ]);
    }
    let a = std::fs::read(&f1).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, std::fs::read(&f2).unwrap());
    let seq = ok(&[
        "simulate", "--spec", p.to_str().unwrap(), "--decoder", "leakage", "--seed", "42", "--trials", "50",
        "--sequential",
    ]);
    assert_eq!(value(&seq, "result", "mean"), value(&String::from_utf8(a).unwrap(), "result", "mean"));
}

#[test]
fn converge_at_one_copy_matches_quantity() {
    let p = spec("correlated_bit.toml");
    let s = p.to_str().unwrap();
    let conv = ok(&["converge", "--spec", s, "--n-max", "1"]);
    let q = ok(&["quantity", "--spec", s, "--name", "I_H", "--a", "U1", "--b", "Y", "--given", "U2", "--param", "eps=0.3"]);
    assert!((num(&conv, "row", "1|testing1") - num(&q, "result", "I_H")).abs() < 1e-12);
}

#[test]
fn invalid_parameter_exits_with_validation_code() {
    let p = spec("toy_mawtc.toml");
    let (code, out, err) = run(&["region", "--spec", p.to_str().unwrap(), "--name", "corollary1", "--param", "eps=2"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.starts_with("error[validation]:"), "{err}");
}

#[test]
fn dimension_cap_exits_with_numeric_code() {
    let p = spec("toy_mawtc.toml");
    let (code, out, err) = run(&[
        "simulate", "--spec", p.to_str().unwrap(), "--decoder", "simultaneous", "--m1", "8", "--k1", "8", "--m2", "8", "--k2", "8",
    ]);
    assert_eq!(code, 2, "{err}");
    assert!(out.is_empty());
    assert!(err.starts_with("error[numeric]:"), "{err}");
}

#[test]
fn malformed_spec_produces_no_report() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "schema_version = 1\nkind = \"mawtc\"\nbogus = 3\n").unwrap();
    let target = dir.path().join("out.csv");
    let (code, out, err) = run(&[
        "--out", target.to_str().unwrap(), "quantity", "--spec", bad.to_str().unwrap(), "--name", "I", "--a", "X1",
        "--b", "Y",
    ]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(!target.exists());
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn missing_spec_file_is_reported() {
    let (code, _, err) = run(&["quantity", "--spec", "/nonexistent/x.toml", "--name", "I", "--a", "X1", "--b", "Y"]);
    assert_eq!(code, 1);
    assert!(err.contains("/nonexistent/x.toml"), "{err}");
}
