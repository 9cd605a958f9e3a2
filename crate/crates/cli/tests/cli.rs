use std::path::Path;
use std::process::{Command, Output};

const K4: &str = r#"{"format":"matroid/v1","name":"K4","n":6,
  "repr":{"kind":"graph","vertices":4,"edges":[[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]]}}"#;

fn ccilab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ccilab"))
        .args(args)
        .env_remove("CCILAB_JOBS")
        .output()
        .expect("binary runs")
}

fn k4_file(dir: &Path) -> String {
    let path = dir.join("k4.json");
    std::fs::write(&path, K4).unwrap();
    path.display().to_string()
}

fn json_of(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn reduce_k4_four_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let out = ccilab(&["reduce", &k4_file(dir.path()), "--cci", "0,2,3,5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["rule"], "R0-size2");
    assert_eq!(v["cci"].as_array().unwrap().len(), 2);
    assert_eq!(v["k_to"], 2);
}

#[test]
fn info_reports_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let out = ccilab(&["info", &k4_file(dir.path()), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["rank"], 3);
    assert_eq!(v["bases"], 16);
    assert_eq!(v["cci_sizes"], serde_json::json!([2, 4]));
}

#[test]
fn missing_file_is_a_usage_error() {
    let out = ccilab(&["info", "missing.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("matroid/v1"));
}

#[test]
fn bad_arguments_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = k4_file(dir.path());
    assert_eq!(
        ccilab(&["reduce", &k4, "--cci", "0,1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        ccilab(&["reduce", &k4, "--cci", "x"]).status.code(),
        Some(2)
    );
    assert_eq!(ccilab(&["frobnicate"]).status.code(), Some(2));
    let out = ccilab(&["verify", "--catalog", "bogus:1", "--report", "r.jsonl"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ccis_envelope_and_partitions() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = k4_file(dir.path());
    let v = json_of(&ccis_json(&k4));
    // every pair of edges plus the three 4-cycles
    assert_eq!(v.as_array().unwrap().len(), 15 + 3);

    let out = ccilab(&[
        "envelope",
        &k4,
        "--circuit",
        "0,2,3,5",
        "--cocircuit",
        "0,2,3,5",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["k"], 4);

    for dual in [false, true] {
        let mut args = vec!["partitions", &k4, "--cci", "0,2,3,5", "--json"];
        if dual {
            args.push("--dual");
        }
        let v = json_of(&ccilab(&args));
        let parts = v["partitions"].as_array().unwrap();
        assert_eq!(parts.len(), 2);
        let kind = if dual { "cohyperplane" } else { "hyperplane" };
        assert!(parts.iter().all(|p| p["kind"] == kind));
    }
}

fn ccis_json(file: &str) -> Output {
    let out = ccilab(&["ccis", file, "--json"]);
    assert_eq!(out.status.code(), Some(0));
    out
}

#[test]
fn verify_graphs_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    let spec = "graphs:4,uniform:6";
    let run = |path: &Path, jobs: &str| {
        ccilab(&[
            "verify",
            "--catalog",
            spec,
            "--jobs",
            jobs,
            "--report",
            path.to_str().unwrap(),
        ])
    };
    assert_eq!(run(&a, "1").status.code(), Some(0));
    assert_eq!(run(&b, "3").status.code(), Some(0));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(!std::fs::read(&a).unwrap().is_empty());
}

#[test]
fn jobs_default_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.jsonl");
    let out = Command::new(env!("CARGO_BIN_EXE_ccilab"))
        .args([
            "verify",
            "--catalog",
            "uniform:4",
            "--report",
            path.to_str().unwrap(),
            "--json",
        ])
        .env("CCILAB_JOBS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["matroids"], 15);
}

#[test]
fn resume_appends_missing_records() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.jsonl");
    let p = path.to_str().unwrap();
    assert!(ccilab(&["verify", "--catalog", "uniform:5", "--report", p])
        .status
        .success());
    let whole = std::fs::read_to_string(&path).unwrap();
    let head: String = whole.lines().take(4).map(|l| format!("{l}\n")).collect();
    std::fs::write(&path, head).unwrap();
    let out = ccilab(&[
        "verify",
        "--catalog",
        "uniform:5",
        "--report",
        p,
        "--resume",
        "--json",
    ]);
    assert!(out.status.success());
    assert_eq!(json_of(&out)["resumed"], 4);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), whole);
}

#[test]
fn empty_catalog_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.jsonl");
    let out = ccilab(&[
        "verify",
        "--catalog",
        "",
        "--report",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(std::fs::read(&path).unwrap().is_empty());
}

#[test]
fn counterexample_search() {
    let out = ccilab(&["counterexample", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let found = v["found"].as_array().unwrap();
    assert!(!found.is_empty());
    for c in found {
        let spectrum = c["spectrum"].as_array().unwrap();
        assert!(spectrum.contains(&2.into()) && spectrum.contains(&4.into()));
        assert!(!spectrum.contains(&3.into()));
    }
}
