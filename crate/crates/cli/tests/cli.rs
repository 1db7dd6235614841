use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_contactkit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = run(&all);
    let code = out.status.code().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(&stdout).unwrap_or_else(|e| {
        panic!("{e}: stdout {stdout:?}, stderr {:?}", String::from_utf8_lossy(&out.stderr))
    });
    (v, code)
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const X2: &str = r#"{"field":{"kind":"Q"},"kind":"truncated","bounds":[2]}"#;
const X2Y2: &str = r#"{"field":{"kind":"Q"},"kind":"truncated","bounds":[2,2]}"#;

#[test]
fn space_dimensions() {
    let d = TempDir::new().unwrap();
    let x2 = write(d.path(), "x2.json", X2);
    let x2y2 = write(d.path(), "x2y2.json", X2Y2);
    for (alg, which, dim) in [(&x2, "kminus", 1), (&x2, "kplus", 4), (&x2y2, "der", 4)] {
        let (v, code) = json(&["spaces", "--algebra", s(alg), "--which", which]);
        assert_eq!(code, 0);
        assert_eq!(v["dim"], dim, "{which}");
        assert!(v.get("basis").is_none());
    }
    let (v, _) = json(&["spaces", "--algebra", s(&x2), "--which", "kminus", "--basis"]);
    // φ(1, x) = x, φ(x, 1) = -x
    assert_eq!(v["basis"], serde_json::json!([[[0, 1, 1, "1"], [1, 0, 1, "-1"]]]));
}

#[test]
fn invalid_algebra_lists_violations() {
    let d = TempDir::new().unwrap();
    let bad = write(
        d.path(),
        "bad.json",
        r#"{"field":{"kind":"Q"},"kind":"explicit","dim":2,"unit":["1","0"],
            "mult":[[0,0,0,"1"],[0,1,1,"1"],[1,0,0,"1"]]}"#,
    );
    let out = run(&["spaces", "--algebra", s(&bad), "--which", "der"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("violation"), "{err}");
    assert!(err.contains(" != "), "{err}");
}

#[test]
fn check_phi_and_xy() {
    let d = TempDir::new().unwrap();
    let x2 = write(d.path(), "x2.json", X2);
    let phi = write(d.path(), "phi.json", r#"{"triples":[[0,1,1,"1"],[1,0,1,"-1"]]}"#);
    let (v, code) = json(&["check", "--algebra", s(&x2), "--bracket", s(&phi), "--props", "contact,poisson"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"][0]["property"], "contact");
    assert_eq!(v["results"][0]["violations"], 0);
    assert_eq!(v["results"][0]["mode"], "exhaustive");
    assert!(v["results"][1]["violations"].as_u64().unwrap() > 0);

    let out = run(&["export", "--builtin", "mz", "--out-dir", s(&d.path().join("mz"))]);
    assert!(out.status.success());
    let br = d.path().join("mz/bracket.json");
    let (v, _) = json(&["check", "--bracket", s(&br), "--props", "poisson"]);
    assert_eq!(v["results"][0]["violations"], 0);
    assert_eq!(v["algebra"]["dim"], 4);
}

#[test]
fn corrupted_bracket_has_a_jacobi_witness() {
    let d = TempDir::new().unwrap();
    let out = run(&["export", "--builtin", "k3", "--out-dir", s(d.path())]);
    assert!(out.status.success());
    let path = d.path().join("bracket.json");
    let mut file: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    // perturb [x, y] = 1 into [x, y] = 1 + x
    let triples = file["triples"].as_array_mut().unwrap();
    triples.push(serde_json::json!([1, 2, 1, "1"]));
    triples.push(serde_json::json!([2, 1, 1, "-1"]));
    std::fs::write(&path, file.to_string()).unwrap();
    let (v, code) = json(&["check", "--bracket", s(&path), "--props", "anticomm,jacobi"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"][0]["violations"], 0);
    assert!(v["results"][1]["violations"].as_u64().unwrap() > 0);
    assert!(!v["results"][1]["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn experiments_reproduce() {
    let (v, code) = json(&["experiment", "mz"]);
    assert_eq!(code, 0);
    assert_eq!(v["feasible"], false);
    assert_eq!(v["certificate_verified"], true);
    assert_eq!(v["dim_der"], 4);
    assert_eq!(v["brute_force_hits"], 0);

    let (v, code) = json(&["experiment", "cartan", "--p", "3", "--left", "W1", "--right", "W1"]);
    assert_eq!(code, 0);
    assert_eq!(v["jacobi"]["mode"], "exhaustive");
    assert_eq!(v["jacobi"]["violations"], 0);
    assert_eq!(v["reproduced"], true);

    let (v, code) = json(&["experiment", "cartan", "--left", "W1", "--right", "H2"]);
    assert_eq!(code, 0);
    assert_eq!(v["reproduced"], true);

    let (v, code) = json(&["experiment", "theorem2", "--p", "3", "--left", "W1", "--right", "K3"]);
    assert_eq!(code, 0);
    assert_eq!(v["restricts_to_inputs"], true);
    assert_eq!(v["contact"]["violations"], 0);
    assert_eq!(v["cross_term_right"], true);
}

#[test]
fn bad_experiment_arguments() {
    let out = run(&["experiment", "cartan", "--p", "4", "--left", "W1", "--right", "W1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["experiment", "cartan", "--left", "X7", "--right", "W1"]);
    assert!(!out.status.success());
}

#[test]
fn extend_verdicts() {
    let d = TempDir::new().unwrap();
    run(&["export", "--builtin", "mz", "--out-dir", s(d.path())]);
    let (v, code) = json(&["extend", "--bracket", s(&d.path().join("bracket.json"))]);
    assert_eq!(code, 0);
    assert_eq!(v["feasible"], false);
    assert_eq!(v["certificate_verified"], true);

    let x2 = write(d.path(), "x2.json", X2);
    let zero = write(d.path(), "zero.json", r#"{"triples":[]}"#);
    let (v, code) = json(&["extend", "--algebra", s(&x2), "--bracket", s(&zero)]);
    assert_eq!(code, 0);
    assert_eq!(v["feasible"], true);
    assert!(v["witness_d"].is_array());

    // [1, 1] = x is commutative, not a contact bracket
    let sym = write(d.path(), "sym.json", r#"{"triples":[[0,0,1,"1"]]}"#);
    let out = run(&["extend", "--algebra", s(&x2), "--bracket", s(&sym)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("precondition"));
}

#[test]
fn json_is_deterministic_across_thread_counts() {
    let args = ["experiment", "theorem2", "--left", "W1", "--right", "K3", "--samples", "5000", "--json"];
    let outs: Vec<Vec<u8>> = ["1", "3"]
        .iter()
        .map(|t| bin().args(args).env("CONTACTKIT_THREADS", t).output().unwrap().stdout)
        .collect();
    assert!(!outs[0].is_empty());
    assert_eq!(outs[0], outs[1]);
    let again = bin().args(args).env("CONTACTKIT_THREADS", "1").output().unwrap().stdout;
    assert_eq!(outs[0], again);

    let out = bin().args(args).env("CONTACTKIT_THREADS", "zero").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bracket_with_mismatched_algebra_is_rejected() {
    let d = TempDir::new().unwrap();
    run(&["export", "--builtin", "mz", "--out-dir", s(d.path())]);
    let x2 = write(d.path(), "x2.json", X2);
    let out = run(&["check", "--algebra", s(&x2), "--bracket", s(&d.path().join("bracket.json"))]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["check", "--bracket", s(&write(d.path(), "bare.json", r#"{"triples":[]}"#))]);
    assert_eq!(out.status.code(), Some(2));
}
