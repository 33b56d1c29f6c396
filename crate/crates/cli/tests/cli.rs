//! End-to-end runs of the `cso` binary.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn cso(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cso")).args(args).output().expect("spawn cso")
}

fn scratch(name: &str, contents: &Value) -> String {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    fs::write(&path, contents.to_string()).unwrap();
    path.to_string_lossy().into_owned()
}

fn real(rows: &[&[f64]]) -> Value {
    json!({
        "n": rows.len(),
        "data": rows.iter().map(|r| r.iter().map(|x| [*x, 0.0]).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn certify_jordan_block() {
    let file = scratch("j2.json", &real(&[&[0.0, 1.0], &[0.0, 0.0]]));
    let out = cso(&["certify", &file]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["search"]["outcome"], "found");
    assert!(r["search"]["residual"].as_f64().unwrap() <= 1e-9);
    assert_eq!(r["irreducible"], true);
    assert_eq!(r["commutant"]["dimension"], 1);
    assert!(r["obstruction"].is_null());
}

#[test]
fn certify_reports_reducing_projection() {
    let file = scratch("diag12.json", &real(&[&[1.0, 0.0], &[0.0, 2.0]]));
    let r = report(&cso(&["certify", &file]));
    assert_eq!(r["irreducible"], false);
    assert_eq!(r["commutant"]["dimension"], 2);
    let p: cso_core::CMatrix = serde_json::from_value(r["reducing_projection"].clone()).unwrap();
    let rank = p.trace().re;
    assert!((rank - 1.0).abs() < 1e-9, "rank {rank}");
}

#[test]
fn certify_generic_matrix_has_obstruction() {
    let file = scratch("generic3.json", &real(&[&[1.0, 2.0, 0.0], &[0.0, 0.0, 3.0], &[0.0, 0.0, 0.5]]));
    let r = report(&cso(&["certify", &file]));
    assert_eq!(r["search"]["outcome"], "not_found");
    assert!(r["trace_defect"].as_f64().unwrap() > 1e-6);
    assert!(r["obstruction"].is_string());
}

#[test]
fn out_flag_writes_file() {
    let file = scratch("j2_out_in.json", &real(&[&[0.0, 1.0], &[0.0, 0.0]]));
    let target = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("j2_report.json");
    let out = cso(&["certify", &file, "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&fs::read_to_string(target).unwrap()).unwrap();
    assert_eq!(r["command"], "certify");
}

#[test]
fn remove_point_from_jordan_block() {
    let t = scratch("rm_t.json", &real(&[&[0.0, 1.0], &[0.0, 0.0]]));
    let s = scratch("rm_s.json", &real(&[&[0.0, 1.0], &[1.0, 0.0]]));
    let out = cso(&["perturb", "remove", &t, "--conj", &s, "--lambda", "0,0", "--eps", "0.1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    let norm = r["result"]["norm_bound"].as_f64().unwrap();
    assert!((norm - 0.05).abs() < 1e-12);
    assert_eq!(r["result"]["diagnostics"]["construction"], "point_removal");
}

#[test]
fn irreducible_perturbation_of_identity() {
    let t = scratch("irr_t.json", &real(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]));
    let s = scratch("irr_s.json", &real(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]));
    let out = cso(&["perturb", "irreducible", &t, "--conj", &s, "--eps", "0.01"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["irreducible"], true);
    assert!(r["result"]["norm_bound"].as_f64().unwrap() < 0.01);
}

#[test]
fn input_errors_exit_one() {
    let t = scratch("err_t.json", &real(&[&[0.0, 1.0], &[0.0, 0.0]]));
    let identity = scratch("err_s.json", &real(&[&[1.0, 0.0], &[0.0, 1.0]]));
    let not_unitary = scratch("err_bad.json", &real(&[&[2.0, 0.0], &[0.0, 1.0]]));
    let malformed = scratch("err_malformed.json", &json!({"n": 3, "data": [[[1.0, 0.0]]]}));

    // J₂ is not symmetric for the canonical conjugation.
    assert_eq!(cso(&["perturb", "irreducible", &t, "--conj", &identity, "--eps", "0.1"]).status.code(), Some(1));
    assert_eq!(cso(&["perturb", "irreducible", &t, "--conj", &not_unitary, "--eps", "0.1"]).status.code(), Some(1));
    assert_eq!(cso(&["certify", &malformed]).status.code(), Some(1));
    assert_eq!(cso(&["certify", "/nonexistent/matrix.json"]).status.code(), Some(1));
    assert_eq!(cso(&["perturb", "remove", &t, "--conj", &identity, "--lambda", "0,0", "--eps", "-1"]).status.code(), Some(1));
    assert_eq!(cso(&["experiment", "density", "--n-min", "5", "--n-max", "2"]).status.code(), Some(1));
    assert_eq!(cso(&["bogus"]).status.code(), Some(1));
    assert_eq!(cso(&["--help"]).status.code(), Some(0));
}

#[test]
fn experiments_are_deterministic_and_seed_sensitive() {
    let base = ["--n-min", "2", "--n-max", "4", "--samples", "5", "--eps", "0.1"];
    let run = |kind: &str, seed: &str| {
        let mut args = vec!["experiment", kind, "--seed", seed];
        args.extend(base);
        let out = cso(&args);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    for kind in ["density", "gnormal"] {
        assert_eq!(run(kind, "3"), run(kind, "3"));
        assert_ne!(run(kind, "3"), run(kind, "4"));
    }
    let r: Value = serde_json::from_slice(&run("density", "3")).unwrap();
    assert!(r.get("wall_clock_seconds").is_none());
}
