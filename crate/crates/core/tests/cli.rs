use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn nce(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nce")).args(args).env_remove("NCE_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn example(name: &str, dir: &Path) -> (String, String) {
    let d = dir.join(name);
    let o = nce(&["example", name, "--out", d.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    (p(&d.join("morphism.json")), p(&d.join("state.json")))
}

fn p(path: &Path) -> String {
    path.to_str().unwrap().to_string()
}

#[test]
fn bell_change_in_nats_and_bits() {
    let dir = tempfile::tempdir().unwrap();
    let (f, w) = example("bell", dir.path());
    let o = nce(&["change", &f, &w]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "-0.693147180560");
    let o = nce(&["--bits", "change", &f, &w]);
    assert_eq!(stdout(&o).trim(), "-1.00000000000");
    assert_eq!(stdout(&nce(&["entropy", &w])).trim(), "0");
}

#[test]
fn plus_measurement_is_negative() {
    let dir = tempfile::tempdir().unwrap();
    let (f, w) = example("plus-measurement", dir.path());
    let value: f64 = stdout(&nce(&["change", &f, &w])).trim().parse().unwrap();
    assert!((value + std::f64::consts::LN_2).abs() < 1e-9);
}

#[test]
fn example_bundle_round_trips() {
    let o = nce(&["example", "remark-quartic"]);
    let bundle: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(bundle["name"], "remark-quartic");
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("s.json");
    std::fs::write(&state, bundle["state"].to_string()).unwrap();
    let o = nce(&["entropy", &p(&state)]);
    assert!(o.status.success());
    let s: f64 = stdout(&o).trim().parse().unwrap();
    assert!((s - 1.75 * std::f64::consts::LN_2).abs() < 1e-11);
}

#[test]
fn pullback_output_reparses() {
    let dir = tempfile::tempdir().unwrap();
    let (f, w) = example("bell", dir.path());
    let o = nce(&["pullback", &f, &w]);
    assert!(o.status.success());
    let pulled = dir.path().join("pulled.json");
    std::fs::write(&pulled, stdout(&o)).unwrap();
    let s: f64 = stdout(&nce(&["entropy", &p(&pulled)])).trim().parse().unwrap();
    assert!((s - std::f64::consts::LN_2).abs() < 1e-11);
}

#[test]
fn support_orthogonal_and_holevo() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let path = dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        p(&path)
    };
    let up = write("up.json", r#"{"shape": [2], "weights": [1], "densities": [[[[1, 0], [0, 0]], [[0, 0], [0, 0]]]]}"#);
    let down = write("down.json", r#"{"shape": [2], "weights": [1], "densities": [[[[0, 0], [0, 0]], [[0, 0], [1, 0]]]]}"#);
    let bang = write("bang.json", r#"{"domain": [1], "codomain": [2], "multiplicities": [[2]]}"#);

    let support: Value = serde_json::from_str(&stdout(&nce(&["support", &up]))).unwrap();
    assert_eq!(support["rank"], 1);
    assert_eq!(stdout(&nce(&["orthogonal", &up, &down])).trim(), "true");
    assert_eq!(stdout(&nce(&["orthogonal", &up, &up])).trim(), "false");
    let chi: f64 = stdout(&nce(&["holevo", &bang, &up, &down, "--lambda", "0.5"])).trim().parse().unwrap();
    assert!((chi - std::f64::consts::LN_2).abs() < 1e-11);
}

#[test]
fn classical_disintegration() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("merge.json");
    std::fs::write(&f, r#"{"domain": [1, 1], "codomain": [1, 1, 1], "multiplicities": [[1, 0], [0, 1], [0, 1]]}"#).unwrap();
    let w = dir.path().join("p.json");
    std::fs::write(&w, r#"{"shape": [1, 1, 1], "weights": [0.5, 0.25, 0.25], "densities": [[[[1, 0]]], [[[1, 0]]], [[[1, 0]]]]}"#).unwrap();
    let o = nce(&["disintegrate", "--classical", &p(&f), &p(&w)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["exists"], true);
    assert_eq!(report["psi"], serde_json::json!([[1.0, 0.0, 0.0], [0.0, 0.5, 0.5]]));
}

#[test]
fn invalid_inputs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"shape": [1, 1], "weights": [0.5, 0.4], "densities": [[[[1, 0]]], [[[1, 0]]]]}"#).unwrap();
    let o = nce(&["entropy", &p(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("simplex invariant"), "{}", stderr(&o));

    std::fs::write(&bad, "{\"shape\": [1],\n \"weights\": [1,]}").unwrap();
    let o = nce(&["entropy", &p(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    assert_eq!(nce(&["entropy", "/nonexistent/state.json"]).status.code(), Some(2));
    assert_eq!(nce(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(nce(&["bogus"]).status.code(), Some(2));
}

#[test]
fn verify_exit_codes_and_seed() {
    let o = nce(&["verify", "--suite", "coboundary", "--trials", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["seed"], 42);
    assert_eq!(report["pass"], true);

    let o = Command::new(env!("CARGO_BIN_EXE_nce")).args(["verify", "--suite", "coboundary", "--trials", "3"]).env("NCE_SEED", "7").output().unwrap();
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["seed"], 7);

    // a tolerance below float noise must fail the suite
    let o = nce(&["verify", "--suite", "iso-invariance", "--trials", "20", "--tol", "1e-300"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bits_only_rescale_entropies() {
    let nats: Value = serde_json::from_str(&stdout(&nce(&["verify", "--suite", "k-counterexample", "--trials", "8"]))).unwrap();
    let bits: Value = serde_json::from_str(&stdout(&nce(&["--bits", "verify", "--suite", "k-counterexample", "--trials", "8"]))).unwrap();
    assert_eq!(nats["units"], "nats");
    assert_eq!(bits["units"], "bits");
    assert_eq!(nats["trials"], bits["trials"]);
    assert_eq!(nats["tol"], bits["tol"]);
    let (a, b) = (nats["max_residual"].as_f64().unwrap(), bits["max_residual"].as_f64().unwrap());
    assert!((b * std::f64::consts::LN_2 - a).abs() <= 1e-15 + 1e-12 * a);
}
