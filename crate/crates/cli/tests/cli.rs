use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hodgeext"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> (Value, i32) {
    let out = run(args);
    let v = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    (v, out.status.code().unwrap())
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    std::fs::write(&p, v.to_string()).unwrap();
    p.to_str().unwrap().to_string()
}

fn verdict_names(v: &Value) -> Vec<(String, bool)> {
    v["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| (x["name"].as_str().unwrap().to_string(), x["pass"].as_bool().unwrap()))
        .collect()
}

#[test]
fn spectrum_of_three_four() {
    let (v, code) = report(&["spectrum", "3", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["milnor_number"], 6);
    assert_eq!(
        v["results"]["spectrum"],
        json!(["7/12", "5/6", "11/12", "13/12", "7/6", "17/12"])
    );
    assert_eq!(v["results"]["hodge_numbers"], json!({"0,1": 3, "1,0": 3}));
    assert_eq!(v["command"], json!(["spectrum", "3", "4"]));
}

#[test]
fn exponents_from_input_file() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "e.json", &json!({"exponents": [2, 3]}));
    let (v, code) = report(&["spectrum", "--input", &f]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["spectrum"], json!(["5/6", "7/6"]));
}

#[test]
fn residue_checks_pass() {
    let (v, code) = report(&["residue", "2", "3", "7"]);
    assert_eq!(code, 0);
    assert!(verdict_names(&v).iter().all(|(_, p)| *p));
    assert_eq!(v["results"]["residue"].as_array().unwrap().len(), 12);
}

#[test]
fn dual_twice_is_identity() {
    let dir = TempDir::new().unwrap();
    let t = write(dir.path(), "t.json", &json!([["1", "1", "0"], ["0", "1", "1"], ["0", "0", "1"]]));
    let q = dir.path().join("q.json");
    let q = q.to_str().unwrap();
    assert_eq!(run(&["quiver", "intermediate", &t, "--output", q]).status.code(), Some(0));
    let (once, _) = report(&["quiver", "dual", q]);
    let d1 = write(dir.path(), "d1.json", &once["results"]);
    let (twice, code) = report(&["quiver", "dual", &d1]);
    assert_eq!(code, 0);
    let original: Value = serde_json::from_str(&std::fs::read_to_string(q).unwrap()).unwrap();
    assert_eq!(twice["results"], original["results"]);
    let d2 = write(dir.path(), "d2.json", &twice["results"]);
    let (eq, code) = report(&["quiver", "equal", &d2, q]);
    assert_eq!((code, eq["results"]["equal"].as_bool()), (0, Some(true)));
}

#[test]
fn star_extension_reports_failed_decomposition() {
    let dir = TempDir::new().unwrap();
    let t = write(dir.path(), "t.json", &json!([["1", "1"], ["0", "1"]]));
    let (star, _) = report(&["quiver", "star", &t]);
    let s = write(dir.path(), "s.json", &star);
    let (v, code) = report(&["quiver", "vanishing", &s]);
    assert_eq!(code, 1);
    assert!(v["verdicts"][0]["witness"].is_object());
    let (v, code) = report(&["quiver", "minimality", &s]);
    assert_eq!(code, 1, "{v}");
}

#[test]
fn gluing_round_trip() {
    let dir = TempDir::new().unwrap();
    let d = write(
        dir.path(),
        "g.json",
        &json!({"v0": 2, "v1": 1, "u": [["1"], ["0"]], "v": [["0", "2"]]}),
    );
    let (v, code) = report(&["quiver", "glue", &d]);
    assert_eq!(code, 0, "{v}");
    assert!(v["results"]["isomorphism"].is_object());
}

#[test]
fn verify_is_reproducible() {
    let a = run(&["verify", "--suite", "quiver", "--suite", "logext", "--seed", "7"]);
    let b = run(&["verify", "--suite", "quiver", "--suite", "logext", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["verify", "--suite", "quiver", "--suite", "logext", "--seed", "8"]);
    let va: Value = serde_json::from_slice(&a.stdout).unwrap();
    let vc: Value = serde_json::from_slice(&c.stdout).unwrap();
    assert_ne!(va["inputs_digest"], vc["inputs_digest"]);
    assert_eq!(va["results"]["suites"][0]["suite"], "quiver");
}

#[test]
fn unknown_suite_is_input_error() {
    let (v, code) = report(&["verify", "--suite", "nope"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "Schema");
}

#[test]
fn input_errors_exit_two() {
    let (v, code) = report(&["spectrum", "1", "3"]);
    assert_eq!((code, v["error"]["kind"].as_str()), (2, Some("Invalid")));
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("broken.json");
    std::fs::write(&p, "{not json").unwrap();
    let (v, code) = report(&["extend", p.to_str().unwrap()]);
    assert_eq!((code, v["error"]["kind"].as_str()), (2, Some("Schema")));
    let (v, code) = report(&["vfilt", "/nonexistent/file.json"]);
    assert_eq!((code, v["error"]["kind"].as_str()), (2, Some("Io")));
}

fn polarized_input() -> Value {
    json!({
        "dim": 2,
        "weight": 1,
        "S": [["0", "1"], ["-1", "0"]],
        "N": [[["0", "0"], ["1", "0"]], [["0", "0"], ["2", "0"]]],
        "m": [1, 2],
        "W": {"ambient": 2, "decreasing": false, "steps": [
            {"index": 0, "basis": [["0", "1"]]},
            {"index": 2, "basis": [["1", "0"], ["0", "1"]]}
        ]},
        "F": {"ambient": 2, "decreasing": true, "steps": [
            {"index": 0, "basis": [["1", "0"], ["0", "1"]]},
            {"index": 1, "basis": [["1", "0"]]}
        ]},
        "I": [0, 1]
    })
}

#[test]
fn extend_passes_checks() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "x.json", &polarized_input());
    let (v, code) = report(&["extend", &f]);
    assert_eq!(code, 0, "{v}");
    let names: Vec<String> = verdict_names(&v).into_iter().map(|(n, _)| n).collect();
    assert!(names.contains(&"weight_check".to_string()));
    assert!(names.contains(&"can_var_1".to_string()));
    assert_eq!(v["results"]["weight"], 2);
}

#[test]
fn extend_rejects_wrong_weight_filtration() {
    let dir = TempDir::new().unwrap();
    let mut x = polarized_input();
    x["weight"] = json!(3);
    let f = write(dir.path(), "x.json", &x);
    let (v, code) = report(&["extend", &f]);
    assert_eq!((code, v["error"]["kind"].as_str()), (2, Some("HypothesisWViolated")));
}

#[test]
fn mhs_of_polarized_curve() {
    let dir = TempDir::new().unwrap();
    let f = write(
        dir.path(),
        "m.json",
        &json!({
            "mhs": {"dim": 2, "bigrading": {"1,0": [["1", "i"]], "0,1": [["1", "-i"]]}, "conj": [["1", "0"], ["0", "1"]]},
            "polarization": {"weight": 1, "S": [["0", "1"], ["-1", "0"]]}
        }),
    );
    let (v, code) = report(&["mhs-of", &f]);
    assert_eq!(code, 0, "{v}");
    let (v, code) = report(&["mhs-of", "--input", &f]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["pure_weight"], 1);
}

#[test]
fn vfilt_toy_and_nearby() {
    let dir = TempDir::new().unwrap();
    let f = write(
        dir.path(),
        "v.json",
        &json!({"r": "-1/2", "window": [-1, 1], "t_dt": [["-1/3", "0"], ["1", "-1/3"]], "alpha": "1/3", "p": 0}),
    );
    let (v, code) = report(&["vfilt", &f]);
    assert_eq!((code, v["error"]["kind"].as_str()), (2, Some("TruncationTooShort")));
    let f = write(
        dir.path(),
        "v.json",
        &json!({"r": "-1/2", "window": [-1, 1], "t_dt": [["-1/3", "0"], ["1", "-1/3"]], "alpha": "1/3"}),
    );
    let (v, code) = report(&["vfilt", &f]);
    assert_eq!(code, 0, "{v}");
    let alphas: Vec<&str> = v["results"]["toy"]["jumps"]
        .as_array()
        .unwrap()
        .iter()
        .map(|j| j["alpha"].as_str().unwrap())
        .collect();
    assert_eq!(alphas, ["-1/2", "1/2"]);
}

#[test]
fn neron_sample() {
    let (v, code) = report(&["neron"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["results"]["presentation"]["relations"], json!([["0", "-s1", "s2"]]));
    let dims: Vec<u64> = v["results"]["fiber_dims"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["fiber_dim"].as_u64().unwrap())
        .collect();
    assert_eq!(dims, [2, 2, 2, 3]);
    let (v, code) = report(&["neron", "--degree-bound", "0"]);
    assert_eq!((code, v["error"]["kind"].as_str()), (2, Some("DegreeBoundTooSmall")));
}

#[test]
fn neron_canonical_extension_frame() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "t.json", &json!({"monodromy": [["0", "1"], ["-1", "1"]]}));
    let (v, code) = report(&["neron", &f]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["residue_frame"]["exponents"], json!(["1/6", "5/6"]));
    let (v, code) = report(&["neron", &f, "--cyclotomic-bound", "3"]);
    assert_eq!((code, v["error"]["kind"].as_str()), (2, Some("NotQuasiUnipotent")));
}

#[test]
fn output_is_deterministic_and_written_to_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("r.json");
    let a = run(&["residue", "3", "4"]);
    let b = run(&["residue", "3", "4"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(run(&["residue", "3", "4", "--output", out.to_str().unwrap()]).status.code(), Some(0));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let printed: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(written["results"], printed["results"]);
}
