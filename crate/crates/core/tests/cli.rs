use std::process::{Command, Output};

fn polygap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polygap")).args(args).output().unwrap()
}

#[test]
fn analyze_cube_reports_unit_jump_rate() {
    let out = polygap(&["analyze", "--polytope", "cube:3"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["certificate"]["passed"], true);
    assert!((v["j_avg"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(polygap(&["chain", "--polytope", "cube:3", "--seed", "1", "--trials", "0"]).status.code(), Some(1));
    assert_eq!(polygap(&["analyze", "--polytope", "no-such-file.json"]).status.code(), Some(1));
    assert_eq!(polygap(&["smoothed", "--base", "cube:3", "--seed", "1"]).status.code(), Some(1));
    assert_eq!(polygap(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(polygap(&["--help"]).status.code(), Some(0));
}

#[test]
fn parse_error_names_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    std::fs::write(&path, "{\"kind\": \"H\", \"dim\": 2,\n \"A\": [[1, 0]], \"bb\": [1]}").unwrap();
    let out = polygap(&["analyze", "--polytope", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bb") && err.contains("line 2"), "{err}");
}

#[test]
fn bound_reads_h_file_and_writes_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let poly = dir.path().join("cube.json");
    std::fs::write(&poly, r#"{"kind": "H", "dim": 3, "A": [[1,0,0],[-1,0,0],[0,1,0],[0,-1,0],[0,0,1],[0,0,-1]], "b": [1,1,1,1,1,1]}"#).unwrap();
    let manifest = dir.path().join("m.json");
    let csv = dir.path().join("row.csv");
    let out = polygap(&[
        "bound",
        "--polytope",
        poly.to_str().unwrap(),
        "--manifest",
        manifest.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["exact_diameter"], 3);
    let m: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(manifest).unwrap()).unwrap();
    assert_eq!(m["assertions"].as_array().unwrap().len(), m["passed"].as_u64().unwrap() as usize);
    assert_eq!(m["failed"], 0);
    assert_eq!(std::fs::read_to_string(csv).unwrap().lines().count(), 2);
}

#[test]
fn smoothed_csv_has_one_row_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let status = polygap(&[
        "smoothed", "--base", "sphere:30:3:5", "--seed", "1", "--seeds", "3", "--trials", "300",
        "--source-trials", "30", "--planes", "20", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(status.status.code(), Some(0), "{}", String::from_utf8_lossy(&status.stderr));
    let text = std::fs::read_to_string(out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "seed,m,d,sigma,alpha,rBest,eventB,eventC,jAvg,piMassG,chi2MassG,diamG,certifiedCutoff,shadowMean"
    );
    assert_eq!(lines.count(), 3);
}

#[test]
fn chain_writes_per_trial_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let out = polygap(&["chain", "--polytope", "cube:3", "--seed", "4", "--trials", "100", "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(csv).unwrap();
    assert!(text.starts_with("trial,jumps,endpoint\n"));
    assert_eq!(text.lines().count(), 101);
}

#[test]
fn unbounded_input_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let poly = dir.path().join("half.json");
    std::fs::write(&poly, r#"{"kind": "H", "dim": 2, "A": [[1,0],[0,1]], "b": [1,1]}"#).unwrap();
    assert_eq!(polygap(&["bound", "--polytope", poly.to_str().unwrap()]).status.code(), Some(1));
}
