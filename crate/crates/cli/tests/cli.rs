use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn qgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgraph")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn analyze_k24_counts_32_trees() {
    let out = qgraph(&["analyze", data("k24.graph").to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["tree_counts"]["brute_force"], 32);
    assert_eq!(v["tree_estimate"]["nearest"], 32);
    let det = v["determinants"]["det_prime_quantum"].as_f64().unwrap();
    assert!((det - 256.0).abs() < 1e-9, "{det}");
    assert_eq!(v["consistent"], true);
}

#[test]
fn analyze_text_star() {
    let out = qgraph(&["analyze", data("star3.graph").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("spanning trees: 1"), "{text}");
    assert!(text.contains("status: consistent"), "{text}");
}

#[test]
fn generic_star_lengths_are_read() {
    let v = json(&qgraph(&["analyze", data("star_generic.graph").to_str().unwrap(), "--json"]));
    let det = v["determinants"]["det_prime_quantum"].as_f64().unwrap();
    // (2^E / E) Σℓ with lengths 1, 1.4, 1.2
    assert!((det - 8.0 / 3.0 * 3.6).abs() < 1e-9, "{det}");
    assert_eq!(v["graph"]["equilateral"], false);
}

#[test]
fn disconnected_file_is_an_input_error() {
    let out = qgraph(&["analyze", data("bad.graph").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("disconnected"));
}

#[test]
fn missing_file_is_an_input_error() {
    assert_eq!(qgraph(&["analyze", data("nope.graph").to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn nonpositive_default_length_rejected() {
    let out = qgraph(&["analyze", data("k24.graph").to_str().unwrap(), "--length", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_is_reproducible() {
    let path = data("c3.graph");
    let args = ["analyze", path.to_str().unwrap(), "--json", "--s", "1.5,2"];
    assert_eq!(qgraph(&args).stdout, qgraph(&args).stdout);
}

#[test]
fn zeta_on_interval_is_riemann_zeta() {
    let pi = std::f64::consts::PI.to_string();
    let out = qgraph(&["zeta", data("p2.graph").to_str().unwrap(), "--s", "2", "--length", &pi, "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let z = v["rows"][0]["hurwitz"].as_f64().unwrap();
    assert!((z - std::f64::consts::PI.powi(4) / 90.0).abs() < 1e-12, "{z}");
    assert_eq!(v["all_within"], true);
}

#[test]
fn zeta_refuses_bad_s() {
    let p = data("p2.graph");
    for s in ["0.5", "1", "-2"] {
        let out = qgraph(&["zeta", p.to_str().unwrap(), "--s", s]);
        assert_eq!(out.status.code(), Some(2), "s = {s}");
    }
}

#[test]
fn zeta_refuses_non_equilateral() {
    let out = qgraph(&["zeta", data("star_generic.graph").to_str().unwrap(), "--s", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_zero_trials_passes() {
    let out = qgraph(&["verify", "--trials", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("result: all passed"));
}

#[test]
fn verify_rejects_large_max_v() {
    assert_eq!(qgraph(&["verify", "--max-v", "11"]).status.code(), Some(2));
}

#[test]
fn zeta_interval_with_large_cutoff() {
    let out = qgraph(&["zeta", data("p2.graph").to_str().unwrap(), "--s", "2", "--cutoff", "200", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let row = &json(&out)["rows"][0];
    let gap = row["difference"].as_f64().unwrap();
    assert!(gap < 1e-7, "{gap}");
    assert!(gap <= row["tail_bound"].as_f64().unwrap());
}
