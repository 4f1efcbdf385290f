use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::Arc;

use hall_core::lf::{random_square, FiniteSupportFn, LFType, ProperMapData};
use hall_core::Quiver;
use num::{BigInt, BigRational};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use tempfile::TempDir;

fn hall(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hall")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn quiver_file(dir: &TempDir, vertices: usize) -> PathBuf {
    write(dir, &format!("a{vertices}.json"), &Quiver::linear(vertices).to_json())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn catalog_of_a2_at_unit_bound_has_five_classes() {
    let dir = TempDir::new().unwrap();
    let q = quiver_file(&dir, 2);
    let out = hall(&["catalog", "--quiver", s(&q), "-p", "2", "--bound", "1,1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["classes"].as_array().unwrap().len(), 5);
    let pretty = hall(&["catalog", "--quiver", s(&q), "-p", "2", "--bound", "1,1"]);
    assert!(String::from_utf8_lossy(&pretty.stdout).starts_with("catalog: 5 classes"));
}

#[test]
fn full_verify_on_a1_passes() {
    let dir = TempDir::new().unwrap();
    let q = quiver_file(&dir, 1);
    let out = hall(&["verify", "--quiver", s(&q), "-p", "2", "--bound", "3", "--checks", "all", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&out);
    assert_eq!(doc["failures"], 0);
    assert_eq!(doc["status"], "pass");
    let checks: Vec<&str> = doc["checks"].as_array().unwrap().iter().map(|c| c["check"].as_str().unwrap()).collect();
    for name in ["unit", "assoc", "riedtmann", "span", "stalk", "orbit"] {
        assert!(checks.contains(&name), "{name} missing from {checks:?}");
    }
}

#[test]
fn check_subsets_limit_the_report() {
    let dir = TempDir::new().unwrap();
    let q = quiver_file(&dir, 2);
    let out = hall(&[
        "verify", "--quiver", s(&q), "--bound", "1,1", "--checks", "unit,riedtmann", "--no-derived", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "check,mode,cases,status,failures");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("unit,classical,"));
    assert!(lines[2].starts_with("riedtmann,classical,"));
}

#[test]
fn usage_and_input_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let q = quiver_file(&dir, 1);
    let missing = dir.path().join("absent.json");
    let bad = write(&dir, "bad.json", "{\"vertices\": 1, \"arrows\": [{\"src\": 0, \"dst\": 3}]}");
    for args in [
        vec!["catalog", "--bound", "2"],
        vec!["catalog", "--quiver", s(&q), "-p", "4", "--bound", "2"],
        vec!["catalog", "--quiver", s(&missing), "--bound", "2"],
        vec!["catalog", "--quiver", s(&bad), "--bound", "2"],
        vec!["verify", "--quiver", s(&q), "--bound", "2", "--checks", "speed"],
        vec!["derived-table", "--quiver", s(&q), "--bound", "2", "--window", "1,-1"],
        vec!["frobnicate"],
    ] {
        let out = hall(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn cap_overruns_exit_with_three() {
    let dir = TempDir::new().unwrap();
    let q = quiver_file(&dir, 1);
    let out = hall(&["verify", "--quiver", s(&q), "--bound", "3", "--cap", "4", "--checks", "riedtmann", "--no-derived"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn identity_pushforward_returns_the_input() {
    let dir = TempDir::new().unwrap();
    let x = Arc::new(LFType::from_pi1(&[1, 2, 3]));
    let chi = FiniteSupportFn::from_values(
        x.clone(),
        [(0, BigRational::new(BigInt::from(2), BigInt::from(3))), (2, BigRational::from_integer(BigInt::from(-5)))],
    )
    .unwrap();
    let map = write(&dir, "id.json", &ProperMapData::identity(x).to_json().to_string());
    let f = write(&dir, "chi.json", &chi.to_json().to_string());
    let out = hall(&["lf-eval", "--map", s(&map), "--fn", s(&f)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&out);
    assert_eq!(doc, chi.to_json());
    assert_eq!(doc["values"][0]["value"], "2/3");
    assert_eq!(doc["values"][1]["value"], "-5/1");
}

#[test]
fn base_change_on_a_generated_square_is_equal() {
    let dir = TempDir::new().unwrap();
    let square = random_square(&mut ChaCha8Rng::seed_from_u64(5), 5, 8);
    let path = write(&dir, "square.json", &square.to_json().to_string());
    let out = hall(&["base-change", "--square", s(&path)]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["equal"], true);
    assert_eq!(doc["max_deviation"], "0/1");
}

#[test]
fn hall_table_csv_lists_gaussian_coefficients() {
    let dir = TempDir::new().unwrap();
    let q = quiver_file(&dir, 1);
    let out = hall(&["hall-table", "--quiver", s(&q), "-p", "3", "--bound", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("x,y,z,coeff"));
    // V_1 · V_1 = (p + 1) V_2 over the one-vertex quiver
    assert!(text.lines().any(|l| l == "c1,c1,c2,4/1"), "{text}");
}

#[test]
fn derived_table_json_uses_rational_strings() {
    let dir = TempDir::new().unwrap();
    let q = quiver_file(&dir, 1);
    let out = hall(&["derived-table", "--quiver", s(&q), "--bound", "1", "--window", "-1,0", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&out);
    assert_eq!(doc["schema"], 1);
    let rows = doc["table"].as_array().unwrap();
    assert!(!rows.is_empty());
    for row in rows {
        for term in row["terms"].as_array().unwrap() {
            assert!(term["coeff_num"].is_string() && term["coeff_den"].is_string());
            assert!(term["z"].is_array());
        }
    }
}

#[test]
fn tables_and_reports_do_not_depend_on_worker_count() {
    let dir = TempDir::new().unwrap();
    let q = quiver_file(&dir, 2);
    for cmd in [
        vec!["hall-table", "--quiver", s(&q), "--bound", "2,2", "--format", "json"],
        vec!["derived-table", "--quiver", s(&q), "--bound", "1,1", "--window", "-1,1", "--format", "csv"],
        vec!["verify", "--quiver", s(&q), "--bound", "1,1", "--window", "-1,1", "--format", "json"],
    ] {
        let run = |w: &str| {
            let mut args = cmd.clone();
            args.extend(["--workers", w]);
            hall(&args)
        };
        let (one, four) = (run("1"), run("4"));
        assert_eq!(one.status.code(), Some(0), "{cmd:?}");
        assert_eq!(one.stdout, four.stdout, "{cmd:?}");
    }
}
