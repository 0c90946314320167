use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn deficiency(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deficiency"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn analyze_square() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "sq.txt", "n = 1\nx1^2\n");
    let out = deficiency(&["analyze", &file, "-i", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["characteristic"], 2);
    let m = &report["modules"][0];
    assert_eq!(m["i"], 1);
    assert_eq!(m["reg_exact"], 0);
    assert_eq!(m["dim"], 0);
    assert_eq!(m["pass"]["theorem"], true);
    assert_eq!(report["passed"], true);
    assert_eq!(m["stanley"][0]["face"], serde_json::json!([]));
    assert_eq!(m["betti"][0], serde_json::json!([0, [-1], 1]));
}

#[test]
fn analyze_with_oracle_and_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "i.txt", "# two lines\nn = 3\n[1,1,0]\nx2*x3\n");
    let json = dir.path().join("r.json");
    let out = deficiency(&["analyze", &file, "--oracle", "--char", "5", "--json", json.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["characteristic"], 5);
    assert_eq!(report["modules"].as_array().unwrap().len(), 4);
    assert_eq!(report["oracle"]["mismatches"], serde_json::json!([]));
    assert!(report["oracle"]["checked_degrees"].as_u64().unwrap() > 0);
    // the component line x2 = 0 gives reg = dim = 2
    assert_eq!(report["modules"][1]["reg_exact"], 2);
    assert_eq!(report["modules"][1]["dim"], 2);
}

#[test]
fn pretty_table() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "m.txt", "n = 2\nx1\nx2\n");
    let out = deficiency(&["analyze", &file, "--pretty"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("reg"));
    assert_eq!(text.lines().filter(|l| l.trim_end().ends_with("yes")).count(), 3);
}

#[test]
fn unit_ideal_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "u.txt", "n = 1\n[0]\n");
    let out = deficiency(&["analyze", &file]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unit ideal not supported"));
}

#[test]
fn composite_characteristic_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "x.txt", "n = 1\nx1\n");
    let out = deficiency(&["analyze", &file, "--char", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("characteristic must be prime"));
}

#[test]
fn parse_error_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "bad.txt", "n = 2\nx1\nx3^2\n");
    let out = deficiency(&["analyze", &file]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
}

#[test]
fn index_out_of_range_and_missing_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "x.txt", "n = 1\nx1\n");
    assert_eq!(deficiency(&["analyze", &file, "-i", "2"]).status.code(), Some(2));
    assert_eq!(deficiency(&["analyze", "/nonexistent/ideal.txt"]).status.code(), Some(2));
    assert_eq!(deficiency(&[]).status.code(), Some(2));
}

#[test]
fn sweep_small_exhaustive() {
    let out = deficiency(&["sweep", "--n", "2", "--max-exp", "1", "--exhaustive", "--json", "/dev/stdout"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    let json_start = text.find('{').unwrap();
    let report: Value = serde_json::from_str(&text[json_start..]).unwrap();
    assert_eq!(report["summary"]["ideals"], 5);
    assert_eq!(report["summary"]["modules"], 15);
    assert_eq!(report["summary"]["failures"], 0);
}

#[test]
fn sweep_squarefree_four_variables() {
    let out = deficiency(&["sweep", "--squarefree", "--n", "4", "--exhaustive"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["summary"]["ideals"], 167);
    assert_eq!(report["summary"]["failures"], 0);
    assert_eq!(report["corpus"]["squarefree"], true);
}

#[test]
fn sweep_rejects_oversized_exhaustive_corpus() {
    let out = deficiency(&["sweep", "--n", "4", "--max-exp", "2", "--exhaustive"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn random_sweep_records_seed() {
    let out = deficiency(&["sweep", "--n", "3", "--max-exp", "3", "--samples", "10", "--seed", "12345"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["corpus"]["seed"], 12345);
    assert_eq!(report["corpus"]["mode"]["kind"], "random");
    assert_eq!(report["summary"]["ideals"], 10);
}

#[test]
fn examples_pass_in_two_characteristics() {
    for p in ["2", "3"] {
        let out = deficiency(&["examples", "--char", p, "-i", "0,1,2"]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        let report: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(report["passed"], true);
        assert!(report["examples"].as_array().unwrap().len() >= 10);
    }
}
