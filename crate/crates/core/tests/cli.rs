use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use edlab::cli::extract_report;
use serde_json::Value;

fn sessions() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/sessions")
}

fn edlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn session(name: &str) -> String {
    sessions().join(name).to_string_lossy().into_owned()
}

fn report(out: &Output) -> Value {
    extract_report(&String::from_utf8_lossy(&out.stdout)).expect("fenced report block")
}

fn write_session(name: &str, text: &str) -> String {
    let path = std::env::temp_dir().join(format!("edlab-cli-test-{}-{name}", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn verify_cor33_passes() {
    let out = edlab(&["verify", "--claim", "cor3.3", "--conductor", "3", "--degree", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["schema"], "edlab-report/1");
    assert_eq!(r["result"]["passed"], true);
    assert_eq!(r["result"]["parameters"]["degree"], "9");
}

#[test]
fn member_x1_cubed_is_certified_outside() {
    let out = edlab(&["member", "--session", &session("jordan-z3.toml"), "--poly", "x1^3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["verdict"], "not-in-certified");
}

#[test]
fn member_witness_re_validates() {
    let out = edlab(&[
        "member",
        "--session",
        &session("jordan-z3.toml"),
        "--poly",
        "x1^2*x2 - x1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["verdict"], "in");
    assert_eq!(r["result"]["witness_valid"], true);
    // apply δ = I - φ to the printed witness independently
    let k = edlab::Conductor::new(3).unwrap();
    let w = edlab::parse_polynomial(r["result"]["witness"].as_str().unwrap(), 2, &k).unwrap();
    let map = edlab::Map::parse(edlab::MapKind::Endomorphism, &["z*x1 + x2", "z*x2"], &k).unwrap();
    assert_eq!(map.apply(&w), edlab::parse_polynomial("x1^2*x2 - x1", 2, &k).unwrap());
}

#[test]
fn resonant_lambda_is_a_hypothesis_error() {
    let out = edlab(&[
        "verify",
        "--claim",
        "thm2.1",
        "--conductor",
        "3",
        "--lambda",
        "z",
        "--lambda",
        "z",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("hypothesis violation"));
    let out = edlab(&[
        "verify",
        "--claim",
        "thm2.1",
        "--conductor",
        "3",
        "--lambda",
        "z",
        "--allow-out-of-hypothesis",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["result"]["exploratory"], true);
}

#[test]
fn failing_checks_exit_one() {
    let out = edlab(&["ideal-test", "--session", &session("radical-z3-2.toml")]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["result"]["first_discrepancy"], 1);
}

#[test]
fn input_errors_exit_two() {
    let bad_poly = edlab(&["member", "--session", &session("jordan-z3.toml"), "--poly", "x1 + * x2"]);
    assert_eq!(bad_poly.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_poly.stderr).contains("1:6"));
    let missing = edlab(&["image", "--session", "/nonexistent/session.toml"]);
    assert_eq!(missing.status.code(), Some(2));
    let usage = edlab(&["frobnicate"]);
    assert_eq!(usage.status.code(), Some(2));
    let bad_arity = write_session(
        "arity.toml",
        "conductor = 1\nvariables = 2\n[map]\nkind = \"endomorphism\"\nimages = [\"x1\"]\n",
    );
    assert_eq!(
        edlab(&["image", "--session", &bad_arity, "-d", "2"]).status.code(),
        Some(2)
    );
    let unknown = edlab(&["verify", "--claim", "thm9.9"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical() {
    for args in [
        vec![
            "image".to_string(),
            "--session".into(),
            session("triangular-shift.toml"),
        ],
        vec![
            "radical-scan".to_string(),
            "--session".into(),
            session("radical-z3-2.toml"),
        ],
        vec!["verify".to_string(), "--claim".into(), "prop4.3.1".into()],
    ] {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = edlab(&args);
        let b = Command::new(env!("CARGO_BIN_EXE_edlab"))
            .args(&args)
            .env("RAYON_NUM_THREADS", "1")
            .output()
            .unwrap();
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn every_shipped_session_loads_and_runs() {
    for entry in std::fs::read_dir(sessions()).unwrap() {
        let path = entry.unwrap().path();
        let p = path.to_string_lossy();
        let out = edlab(&["normalize", "--session", &p]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{p}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let out = edlab(&["image", "--session", &p, "--degree", "3"]);
        assert_eq!(out.status.code(), Some(0), "{p}");
        assert_eq!(report(&out)["result"]["witnesses_valid"], true);
    }
}

#[test]
fn compare_and_mz_check_pass_on_the_shipped_sessions() {
    let out = edlab(&["compare", "--session", &session("triple-jordan-compare.toml")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["equal"], true);
    let out = edlab(&["mz-check", "--session", &session("radical-z3-2.toml"), "--degree", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["violations"], Value::Array(vec![]));
}

#[test]
fn resonance_and_explorer_subcommands() {
    let out = edlab(&[
        "resonance",
        "--conductor",
        "3",
        "--lambda",
        "z",
        "--lambda",
        "2",
        "--lambda",
        "1/2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["agree"], true);
    assert_eq!(r["result"]["bounded"], serde_json::json!([0, 1, 1]));
    let out = edlab(&["explore-conj45", "--degree", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["v_minus_evidence"], Value::Array(vec![]));
}

#[test]
fn verify_reads_parameters_from_a_session() {
    let s = write_session(
        "verify.toml",
        "conductor = 1\nvariables = 2\n[map]\nkind = \"endomorphism\"\nimages = [\"2*x1 + x2\", \"2*x2\"]\n[options]\nclaim = \"thm2.1\"\ndegree = 4\n",
    );
    let out = edlab(&["verify", "--session", &s]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["input"]["claim"], "thm2.1");
    assert_eq!(r["result"]["passed"], true);
}
