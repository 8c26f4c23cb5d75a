use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_schur-dfs"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, v.to_string()).unwrap();
    p
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn identity_matrix(dim: usize) -> Value {
    Value::Array(
        (0..dim)
            .map(|r| Value::Array((0..dim).map(|c| json!([if r == c { 1.0 } else { 0.0 }, 0.0])).collect()))
            .collect(),
    )
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn decompose_tables() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("d.json");
    let o = run(&["decompose", "--n", "3", "--d", "2", "--out", s(&out)]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("total 64"));
    assert!(text.contains("irrep count 3"));
    let v = read_json(&out);
    let rows: Vec<(Value, u64, u64)> = v["sectors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["lambda"].clone(), r["syt_dim"].as_u64().unwrap(), r["weyl_dim"].as_u64().unwrap()))
        .collect();
    assert_eq!(rows, vec![(json!([3]), 1, 20), (json!([2, 1]), 2, 20), (json!([1, 1, 1]), 1, 4)]);

    let o = run(&["decompose", "--n", "1", "--d", "2", "--out", s(&out)]);
    assert!(o.status.success());
    assert_eq!(read_json(&out)["total"], 4);
    let o = run(&["decompose", "--n", "4", "--d", "2", "--out", s(&out)]);
    assert!(o.status.success());
    let v = read_json(&out);
    assert_eq!(v["sectors"].as_array().unwrap().len(), 5);
    assert_eq!(v["total"], 256);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["decompose", "--n", "0"]).status.code(), Some(1));
    assert_eq!(run(&["decompose"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "--level", "slow"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn schur_basis_files() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("b1.txt");
    assert!(run(&["schur-basis", "--n", "1", "--d", "2", "--out", s(&out)]).status.success());
    let file = schur_dfs::io::read_basis(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let id = schur_dfs::CMatrix::identity(4, 4);
    assert!((file.unitary - id).camax() < 1e-15);

    let out = dir.path().join("b3.txt");
    assert!(run(&["schur-basis", "--n", "3", "--d", "2", "--out", s(&out)]).status.success());
    let file = schur_dfs::io::read_basis(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(file.labels.len(), 64);
    let u = &file.unitary;
    assert!((u.adjoint() * u - schur_dfs::CMatrix::identity(64, 64)).camax() < 1e-10);
}

#[test]
fn size_guard_is_input_error() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("b.txt");
    let o = bin().args(["schur-basis", "--n", "3", "--d", "2", "--out", s(&out)]).env("SCHUR_DFS_MAX_DIM", "16").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("SCHUR_DFS_MAX_DIM"));
}

#[test]
fn analyze_builder_channel() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "s.json", &json!({"d": 2, "n": 3, "kind": "kraus", "builder": {"name": "collective_damping", "params": {"p": 0.3}}}));
    let out = dir.path().join("a.json");
    let o = run(&["analyze", s(&spec), "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = read_json(&out);
    assert_eq!(v["certificate"]["classification"], "strong");
    let sizes: Vec<(u64, u64)> = v["blocks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| (b["block_count"].as_u64().unwrap(), b["noisy_dim"].as_u64().unwrap()))
        .collect();
    assert_eq!(sizes, vec![(1, 20), (2, 20), (1, 4)]);
    let flagged: Vec<&Value> = v["dfs"]["sectors"].as_array().unwrap().iter().filter(|s| s["flagged"] == true).collect();
    assert_eq!(flagged.len(), 1);
    assert_eq!(flagged[0]["lambda"], json!([2, 1]));
    assert_eq!(v["leakage"]["tol"], 1e-8);
}

#[test]
fn analyze_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "s.json", &json!({"d": 2, "n": 3, "kind": "lindblad", "builder": {"name": "pair_decay", "params": {"gamma2": 0.5}}}));
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for out in [&a, &b] {
        assert!(run(&["analyze", s(&spec), "--seed", "42", "--out", s(out)]).status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn analyze_explicit_identity() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "id.json", &json!({"d": 2, "n": 3, "kind": "kraus", "operators": [identity_matrix(8)]}));
    let out = dir.path().join("a.json");
    assert!(run(&["analyze", s(&spec), "--out", s(&out)]).status.success());
    let v = read_json(&out);
    assert_eq!(v["certificate"]["classification"], "strong");
    assert!(v["leakage"]["value"].as_f64().unwrap() < 1e-14);
    assert!(v["protection"]["max_deviation"]["value"].as_f64().unwrap() < 1e-14);
}

#[test]
fn analyze_asymmetric_channel() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "s.json", &json!({"d": 2, "n": 3, "kind": "kraus", "builder": {"name": "first_qubit_damping", "params": {"p": 0.5}}}));
    let out = dir.path().join("a.json");
    assert!(run(&["analyze", s(&spec), "--out", s(&out)]).status.success());
    let v = read_json(&out);
    assert_eq!(v["certificate"]["classification"], "none");
    assert!(v["leakage"]["value"].as_f64().unwrap() > 1e-3);
    assert!(v["dfs"]["sectors"].as_array().unwrap().iter().all(|s| s["flagged"] == false));
}

#[test]
fn analyze_input_errors() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("nope.json");
    assert_eq!(run(&["analyze", s(&missing)]).status.code(), Some(2));

    let spec = write(&dir, "bad.json", &json!({"d": 2, "n": 1, "kind": "kraus", "operators": [[[[1, 0], [0, 0]], [[0, 0], "x"]]]}));
    let o = run(&["analyze", s(&spec)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("operators[0][1][1]"));

    let spec = write(&dir, "ntp.json", &json!({"d": 2, "n": 1, "kind": "kraus", "operators": [[[[1, 0], [0, 0]], [[0, 0], [0.5, 0]]]]}));
    assert_eq!(run(&["analyze", s(&spec)]).status.code(), Some(3));

    let spec = write(&dir, "ok.json", &json!({"d": 2, "n": 1, "kind": "kraus", "operators": [identity_matrix(2)]}));
    assert_eq!(run(&["analyze", s(&spec), "--tol", "-1"]).status.code(), Some(1));
}

#[test]
fn evolve_reports() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "l.json", &json!({"d": 2, "n": 3, "kind": "lindblad", "builder": {"name": "local_decay", "params": {"gamma1": 1.0}}}));
    let out = dir.path().join("e.json");
    let o = run(&["evolve", s(&spec), "--t", "0,1", "--verify-dense", "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = read_json(&out);
    let times = v["times"].as_array().unwrap();
    assert!(times[0]["dense_deviation"]["value"].as_f64().unwrap() < 1e-14);
    assert!(times[1]["dense_deviation"]["value"].as_f64().unwrap() < 1e-8);

    let spec = write(&dir, "c.json", &json!({"d": 2, "n": 3, "kind": "lindblad", "builder": {"name": "collective_decay", "params": {"gamma3": 1.0, "gamma4": 0.5, "gamma5": 0.5}}}));
    let o = run(&["evolve", s(&spec), "--t", "0.5", "--out", s(&out)]);
    assert!(o.status.success());
    let v = read_json(&out);
    let sectors = v["times"][0]["sectors"].as_array().unwrap();
    assert_eq!(sectors.len(), 3);
    assert_eq!(sectors[1]["block_norms"].as_array().unwrap().len(), 2);
    assert!(v["times"][0]["dense_deviation"].is_null());
}

#[test]
fn evolve_refusals() {
    let dir = TempDir::new().unwrap();
    let kraus = write(&dir, "k.json", &json!({"d": 2, "n": 2, "kind": "kraus", "operators": [identity_matrix(4)]}));
    assert_eq!(run(&["evolve", s(&kraus), "--t", "1"]).status.code(), Some(2));

    // decay on the first qubit only: not block diagonal
    let mut l = vec![vec![json!([0.0, 0.0]); 4]; 4];
    l[0][2] = json!([1.0, 0.0]);
    l[1][3] = json!([1.0, 0.0]);
    let spec = write(&dir, "a.json", &json!({"d": 2, "n": 2, "kind": "lindblad", "operators": [l]}));
    let o = run(&["evolve", s(&spec), "--t", "1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("leakage"));
}

#[test]
fn verify_fast_passes() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("v.json");
    let o = run(&["verify", "--level", "fast", "--out", s(&out)]);
    assert!(o.status.success(), "{}", stdout(&o));
    let v = read_json(&out);
    assert_eq!(v["passed"], true);
    let names: Vec<&str> = v["suites"].as_array().unwrap().iter().map(|s| s["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"reference basis vector"));
    assert!(names.contains(&"twin-block equality"));
}
