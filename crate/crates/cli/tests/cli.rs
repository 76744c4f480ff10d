use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn msl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_msl")).args(args).env_remove("MSL_FIELD").output().expect("msl runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn build_writes_cells_and_a_summary() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("fano.json");
    let out = msl(&["build", "--matroid", "builtin:fano", "--space", "points:2", "-o", path_str(&file)]);
    assert_eq!(out.status.code(), Some(0));
    let summary = stdout_json(&out);
    assert_eq!(summary["dim"], 2);
    assert_eq!(summary["betti"][0]["betti"]["2"], 1);
    let arr: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    let cells = arr["cells"].as_array().unwrap();
    assert_eq!(cells.len() as u64, summary["cells"].as_u64().unwrap());
    assert!(cells.iter().all(|c| c["chain"].is_array() && c["simplex"].is_array() && c["dim"].is_u64()));
}

#[test]
fn uniform_on_a_circle_gives_a_three_sphere() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("u23.json");
    let out = msl(&["build", "--matroid", "uniform:2,3", "--space", "cycle:4", "-o", path_str(&file)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["betti"][0]["betti"]["3"], 1);
}

#[test]
fn verify_from_file_matches_the_in_memory_report() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("fano.json");
    assert!(msl(&["build", "--matroid", "builtin:fano", "--space", "points:2", "-o", path_str(&file)]).status.success());
    let from_file = msl(&["verify", path_str(&file)]);
    let in_memory = msl(&["verify", "--matroid", "builtin:fano", "--space", "points:2"]);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(from_file.stdout, in_memory.stdout);
    let report = stdout_json(&from_file);
    assert_eq!(report["passed"], true);
    assert_eq!(report["union"]["computed"][0]["betti"]["1"], 29);
    assert_eq!(report["free_action"]["passed"], true);
}

#[test]
fn uniform_on_a_triangle_verifies() {
    let out = msl(&["verify", "--matroid", "uniform:2,3", "--space", "sphere:1"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn deleting_a_cell_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("fano.json");
    assert!(msl(&["build", "--matroid", "builtin:fano", "--space", "points:2", "-o", path_str(&file)]).status.success());
    let arr: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    for dim in [0, 2] {
        let mut broken = arr.clone();
        let cells = broken["cells"].as_array_mut().unwrap();
        let pos = cells.iter().position(|c| c["dim"] == dim).unwrap();
        cells.remove(pos);
        let bad = dir.path().join(format!("bad{dim}.json"));
        std::fs::write(&bad, serde_json::to_string(&broken).unwrap()).unwrap();
        let out = msl(&["verify", path_str(&bad)]);
        assert_eq!(out.status.code(), Some(1), "dim {dim}");
        assert_eq!(stdout_json(&out)["passed"], false);
    }
}

#[test]
fn joinup_censuses() {
    let out = msl(&["morse", "joinup", "--space", "points:2", "--copies", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["census"], serde_json::json!({"0": 1, "1": 1}));
    assert_eq!(v["arrows"].as_array().unwrap().len(), 3);
    let v = stdout_json(&msl(&["morse", "joinup", "--space", "points:3", "--copies", "2"]));
    assert_eq!(v["census"], serde_json::json!({"0": 1, "1": 4}));
}

#[test]
fn wedge_hypotheses_pass_for_uniform() {
    let out = msl(&["morse", "hypotheses", "--matroid", "uniform:2,3", "--space", "points:2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["entries"].as_array().unwrap().len(), 3);
}

#[test]
fn predict_and_betti_agree_over_both_fields() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("fano.json");
    assert!(msl(&["build", "--matroid", "builtin:fano", "--space", "points:2", "-o", path_str(&file)]).status.success());
    let predicted = stdout_json(&msl(&["--field", "both", "predict", "--matroid", "builtin:fano", "--space", "points:2"]));
    let union = stdout_json(&msl(&["--field", "both", "betti", "--arrangement", path_str(&file), "--union"]));
    assert_eq!(predicted, union);
    assert_eq!(predicted["GF2"]["betti"]["1"], 29);
}

#[test]
fn field_defaults_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_msl"))
        .args(["betti", "--space", "cycle:5"])
        .env("MSL_FIELD", "GF2")
        .output()
        .unwrap();
    let v = stdout_json(&out);
    assert!(v.get("GF2").is_some() && v.get("Q").is_none());
}

#[test]
fn flag_ell_map_is_accepted() {
    let out = msl(&["verify", "--matroid", "boolean:2", "--space", "points:2", "--ell", "flag:[[],[1],[1,2]]"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn config_file_is_read_and_unknown_keys_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("run.json");
    std::fs::write(&good, r#"{"matroid":"uniform:2,3","space":"points:2","ell":"default"}"#).unwrap();
    assert_eq!(msl(&["verify", "--config", path_str(&good)]).status.code(), Some(0));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"matroid":"uniform:2,3","space":"points:2","colour":"red"}"#).unwrap();
    let out = msl(&["verify", "--config", path_str(&bad)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn input_errors_exit_with_two_and_json_on_stderr() {
    for args in [
        vec!["build", "--matroid", "uniform:5,3", "--space", "points:2"],
        vec!["build", "--matroid", "builtin:fano", "--space", "points:0"],
        vec!["build", "--matroid", "builtin:fano", "--space", "points:2", "--ell", "flag:[[],[9]]"],
        vec!["verify", "/nonexistent/arrangement.json"],
    ] {
        let out = msl(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err: Value = serde_json::from_slice(&out.stderr).unwrap();
        assert!(err["message"].is_string());
    }
}

#[test]
fn matroid_files_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("m.json");
    std::fs::write(&file, r#"{"ground":[1,2,3],"flats":[[],[1],[2],[3],[1,2,3]]}"#).unwrap();
    let out = msl(&["verify", "--matroid", path_str(&file), "--space", "points:2"]);
    assert_eq!(out.status.code(), Some(0));
    std::fs::write(&file, r#"{"ground":[1,2,3,4],"flats":[[],[1],[2],[3],[4],[1,2],[3,4],[1,2,3,4]]}"#).unwrap();
    let out = msl(&["verify", "--matroid", path_str(&file), "--space", "points:2"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "not_a_matroid");
}
