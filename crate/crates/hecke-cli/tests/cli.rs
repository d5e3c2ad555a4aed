use std::process::{Command, Output};

fn hecke(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hecke")).args(args).output().expect("binary runs")
}

fn stdout_json_lines(out: &Output) -> Vec<serde_json::Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("stdout is JSON lines"))
        .collect()
}

#[test]
fn build_reports_the_three_vertex_quiver() {
    let out = hecke(&["build", "--l", "3", "--field", "cyclo"]);
    assert!(out.status.success());
    let v = &stdout_json_lines(&out)[0];
    assert_eq!(v["vertices"].as_array().unwrap().len(), 2);
    assert_eq!(v["arrows"].as_array().unwrap().len(), 2);
    assert_eq!(v["dimension"], 6);
}

#[test]
fn build_reports_the_five_vertex_quiver_over_gf16() {
    let out = hecke(&["build", "--l", "5", "--field", "gf", "--p", "2", "--k", "4"]);
    assert!(out.status.success());
    let v = &stdout_json_lines(&out)[0];
    assert_eq!(v["vertices"].as_array().unwrap().len(), 4);
    assert_eq!(v["arrows"].as_array().unwrap().len(), 6);
    assert_eq!(v["dimension"], 14);
}

#[test]
fn build_degenerates_to_a_single_loop() {
    let out = hecke(&["build", "--l", "2", "--field", "cyclo"]);
    assert!(out.status.success());
    let v = &stdout_json_lines(&out)[0];
    let arrows = v["arrows"].as_array().unwrap();
    assert_eq!(arrows.len(), 1);
    assert_eq!(arrows[0]["from"], arrows[0]["to"]);
    assert_eq!(v["relations"][0]["terms"][0]["path"], serde_json::json!(["x", "x"]));
}

#[test]
fn build_output_bytes_are_stable() {
    let dir = std::env::temp_dir().join(format!("hecke-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let stem = dir.join("quiver");
    let stem_arg = stem.to_str().unwrap();
    let first = hecke(&["build", "--l", "4", "--field", "cyclo", "--out", stem_arg]);
    assert!(first.status.success());
    let json1 = std::fs::read(stem.with_extension("json")).unwrap();
    let dot1 = std::fs::read(stem.with_extension("dot")).unwrap();
    let second = hecke(&["build", "--l", "4", "--field", "cyclo", "--out", stem_arg]);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(json1, std::fs::read(stem.with_extension("json")).unwrap());
    assert_eq!(dot1, std::fs::read(stem.with_extension("dot")).unwrap());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn verify_four_passes_with_the_band_matrix() {
    let out = hecke(&["verify", "--l", "4", "--field", "cyclo"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(!text.contains("\"status\":\"fail\""));
    assert!(text.contains("[2,1,0; 1,2,1; 0,1,2]"));
    assert!(text.contains("all blocks have size three exactly when the order is three"));
}

#[test]
fn verify_three_reports_the_jordan_type() {
    let out = hecke(&["verify", "--l", "3", "--field", "gf", "--p", "2", "--k", "2"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("(3,3)"));
}

#[test]
fn missing_root_of_unity_is_an_error() {
    let out = hecke(&["build", "--l", "3", "--field", "gf", "--p", "5", "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("root of unity"));
}

#[test]
fn gf_requires_characteristic() {
    let out = hecke(&["build", "--l", "3", "--field", "gf"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--p"));
}

#[test]
fn degree_cap_blocks_large_orders() {
    let out = Command::new(env!("CARGO_BIN_EXE_hecke"))
        .args(["build", "--l", "4", "--field", "cyclo"])
        .env("HECKE_MAX_N", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_hecke"))
        .args(["demo-permmod"])
        .env("HECKE_MAX_N", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn demo_permmod_confirms_the_example() {
    let out = hecke(&["demo-permmod", "--char2"]);
    assert!(out.status.success());
    let lines = stdout_json_lines(&out);
    assert_eq!(lines[0]["command"], "demo-permmod --char2");
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("dim = 20"));
    assert!(text.contains("dim = 18"));
    assert!(!text.contains("\"status\":\"fail\""));
    let last = lines.last().unwrap();
    assert_eq!(last["summary"]["passed"], last["summary"]["total"]);
}
