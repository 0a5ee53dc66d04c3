use std::io::Write;
use std::process::Command;

use serde_json::Value;

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lattice-cft")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

const PUNCTURED_TORUS: &str = r#"{"format":1,"genus":1,"boundaries":[{"id":"x","orientation":"out"},{"id":"y","orientation":"in"}],"labels":{"x":[1],"y":[1]}}"#;

#[test]
fn disc_of_a1() {
    let (code, out) = cli(&["disc", "--lattice", "[[2]]"]);
    assert_eq!(code, 0);
    let v = json(&out);
    for key in ["format", "command", "inputs_digest", "seed", "results"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["results"]["invariant_factors"], serde_json::json!([2]));
    assert_eq!(v["results"]["order"], 2);
    assert_eq!(v["results"]["gauss_sum"]["sigma"], 1);
}

#[test]
fn sphere_has_one_block() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, r#"{{"format":1,"components":[{{"genus":0,"boundaries":[]}}]}}"#).unwrap();
    let (code, out) = cli(&["blocks", "--surface", f.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["results"]["dimension"], 1);
}

#[test]
fn input_errors_are_structured() {
    let cases: [(&[&str], &str); 5] = [
        (&["disc", "--lattice", "[[2]"], "parse"),
        (&["disc", "--lattice", "[[3]]"], "lattice"),
        (&["blocks", "--surface", "/nonexistent/sphere.json"], "io"),
        (&["blocks", "--surface", r#"{"genus":0,"boundaries":[{"id":"a","orientation":"sideways"}]}"#], "parse"),
        (&["modular", "--lattice", "A1", "--tolerance=-1"], "invalid_input"),
    ];
    for (args, kind) in cases {
        let (code, out) = cli(args);
        assert_eq!(code, 2, "{args:?}");
        let v = json(&out);
        assert_eq!(v["error_kind"], kind, "{args:?}: {out}");
        assert!(v["detail"].as_str().is_some_and(|d| !d.is_empty()));
    }
    let (code, out) = cli(&["no-such-command"]);
    assert_eq!(code, 2);
    assert_eq!(json(&out)["error_kind"], "parse");
}

#[test]
fn verification_failure_exits_one() {
    let (code, out) = cli(&["modular", "--lattice", "A2", "--tolerance", "0"]);
    assert_eq!(code, 1);
    assert!(json(&out)["results"]["relations"]["st_cubed"].is_number());
}

#[test]
fn reports_are_byte_identical() {
    let args = ["factorize", "--lattice", "A2", "--surface", PUNCTURED_TORUS, "--trials", "4", "--seed", "11"];
    let (c1, a) = cli(&args);
    let (c2, b) = cli(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let (_, other) = cli(&["factorize", "--lattice", "A2", "--surface", PUNCTURED_TORUS, "--trials", "4", "--seed", "12"]);
    assert_ne!(a, other);
    assert_eq!(json(&a)["inputs_digest"], json(&other)["inputs_digest"]);
}

#[test]
fn output_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let (code, out) = cli(&["verlinde", "--surface", PUNCTURED_TORUS, "--output", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let v = json(&std::fs::read_to_string(path).unwrap());
    assert_eq!(v["results"]["block_dimension"], 2);
    assert_eq!(v["results"]["rounded"], 2);
}

#[test]
fn theta_and_fock_commands() {
    let (code, out) = cli(&["theta", "--tau", "[[[0,1]]]", "--tol", "1e-12"]);
    assert_eq!(code, 0);
    let v = json(&out);
    let re = v["results"]["value_re"].as_f64().unwrap();
    let direct: f64 = (-20i32..=20).map(|n| (-std::f64::consts::PI * (n * n) as f64).exp()).sum();
    assert!((re - direct).abs() < 1e-12);

    let (code, out) = cli(&["fock", "character", "--lattice", "[[2]]", "--phi", "1", "--max-energy", "3"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["results"]["ground_energy"], "1/4");
    assert_eq!(v["results"]["coefficients"], serde_json::json!([2, 2, 6, 8]));

    let (code, out) = cli(&["fock", "overlap", "--t", "[[0.5]]"]);
    assert_eq!(code, 0);
    let overlap = json(&out)["results"]["overlap"].as_f64().unwrap();
    assert!((overlap - 0.75f64.powf(0.25)).abs() < 1e-12);
}

#[test]
fn heisenberg_command() {
    let (code, out) = cli(&["heisenberg", "--lattice", "A2", "--genus", "2", "--decompose"]);
    assert_eq!(code, 0, "{out}");
    let v = json(&out);
    assert_eq!(v["results"]["dimension"], 9);
    assert_eq!(v["results"]["decomposition"]["failures"], 0);
}
