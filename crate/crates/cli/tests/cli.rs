use std::process::{Command, Output};

use dcsa_core::{Matrix, RatFunc, TowerElem};
use serde_json::Value;

const EX35: &str = r#"[["1/(4*x)","0"],["0","-1/(4*x)"]]"#;
const JORDAN: &str = r#"[["0","1/x"],["0","0"]]"#;

fn dcsa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dcsa")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let out = dcsa(&all);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn rat_matrix(v: &Value) -> Matrix<RatFunc> {
    let rows = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_array().unwrap().iter().map(|e| e.as_str().unwrap().parse().unwrap()).collect())
        .collect();
    Matrix::from_rows(rows).unwrap()
}

fn tower_matrix(v: &Value) -> Matrix<TowerElem> {
    let rows = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_array().unwrap().iter().map(|e| e.as_str().unwrap().parse().unwrap()).collect())
        .collect();
    Matrix::from_rows(rows).unwrap()
}

fn rf(s: &str) -> RatFunc {
    s.parse().unwrap()
}

fn te(s: &str) -> TowerElem {
    s.parse().unwrap()
}

#[test]
fn associated_ode_example() {
    let v = json(&["associated-ode", "--P", EX35]);
    let conn = rat_matrix(&v["connection"]);
    assert_eq!(conn, Matrix::diagonal(&[rf("0"), rf("1/(2*x)"), rf("-1/(2*x)"), rf("0")]));
}

#[test]
fn solve_scalar_zero() {
    let v = json(&["solve", "--P", r#"[["0"]]"#]);
    assert_eq!(tower_matrix(&v["fundamental"]), Matrix::identity(1));
    assert_eq!(v["verified"], Value::Bool(true));
}

#[test]
fn solve_example_associated() {
    let v = json(&["solve", "--P", EX35]);
    let z = tower_matrix(&v["fundamental"]);
    assert_eq!(z, Matrix::diagonal(&[te("1"), te("(x)^(1/2)"), te("(x)^(-1/2)"), te("1")]));
    let col = json(&["solve", "--P", EX35, "--column"]);
    assert_eq!(tower_matrix(&col["fundamental"]), Matrix::diagonal(&[te("(x)^(1/4)"), te("(x)^(-1/4)")]));
}

#[test]
fn classify_example_towers() {
    let v = json(&["classify", "--P", EX35]);
    assert_eq!(v["group"]["torus_rank"], 0);
    assert_eq!(v["finite_order"], 2);
    assert_eq!(v["description"]["algebraic_degree"], 2);
    let v = json(&["classify", "--P", EX35, "--tower", r#"["(x)^(1/4)"]"#]);
    assert_eq!(v["finite_order"], 4);
}

#[test]
fn split_check_over_square_root() {
    let v = json(&["split-check", "--P", EX35, "--tower", r#"["(x)^(1/2)"]"#]);
    assert!(v["fundamental"].is_null());
    let z = tower_matrix(&v["certificate"]);
    let passed = json(&["split-check", "--P", EX35, "--Z", &serde_json::to_string(&z).unwrap()]);
    assert_eq!(passed["passed"], Value::Bool(true));
    let failed = json(&["split-check", "--P", EX35, "--Z", r#"[["1","0"],["0","1"]]"#]);
    assert_eq!(failed["passed"], Value::Bool(false));
    assert_eq!(failed["failures"].as_array().unwrap().len(), 2);
}

#[test]
fn constants_over_square_root() {
    let v = json(&["constants", "--P", EX35, "--tower", r#"["(x)^(1/2)"]"#]);
    assert_eq!(v["dimension"], 4);
    assert_eq!(v["trivial"], Value::Bool(true));
    let base = json(&["constants", "--P", EX35, "--tower", "[]"]);
    assert_eq!(base["dimension"], 2);
    assert_eq!(base["trivial"], Value::Bool(false));
}

#[test]
fn ideals_verdicts() {
    let v = json(&["ideals", "--P", EX35]);
    assert_eq!(v["reductive"]["reductive"], Value::Bool(true));
    assert_eq!(v["reductive"]["decomposition"].as_array().unwrap().len(), 2);
    let v = json(&["ideals", "--P", JORDAN]);
    assert_eq!(v["reductive"]["reductive"], Value::Bool(false));
    assert!(v["reductive"]["witness"].is_array());
    // Flags serialize as lists of matrix bases; each basis matrix re-parses.
    let flag = v["flag"].as_array().unwrap();
    assert_eq!(flag.len(), 2);
    for ideal in flag {
        for m in ideal.as_array().unwrap() {
            assert_eq!(rat_matrix(m).rows(), 2);
        }
    }
}

#[test]
fn gauge_check_transports() {
    let v = json(&[
        "gauge-check",
        "--P",
        EX35,
        "--m",
        r#"[["1","x"],["0","1"]]"#,
        "--Z",
        r#"[["(x)^(1/4)","0"],["0","(x)^(-1/4)"]]"#,
    ]);
    assert_eq!(v["transported_verified"], Value::Bool(true));
    assert_eq!(rat_matrix(&v["connection"]).get(0, 1), &rf("-1/2"));
    tower_matrix(&v["transported"]);
}

#[test]
fn tensor_power_report_is_an_algebra() {
    let v = json(&["tensor-power", "--P", EX35, "--power", "2"]);
    assert_eq!(v["n"], 4);
    let p2 = rat_matrix(&v["P"]);
    assert_eq!(p2, Matrix::diagonal(&[rf("1/(2*x)"), rf("0"), rf("0"), rf("-1/(2*x)")]));
    // The report feeds back in as --P.
    let again = json(&["associated-ode", "--P", &v.to_string()]);
    assert_eq!(again["n"], 4);
}

#[test]
fn file_input() {
    let dir = std::env::temp_dir().join(format!("dcsa-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("p.json");
    std::fs::write(&path, format!(r#"{{"n": 2, "P": {EX35}}}"#)).unwrap();
    let v = json(&["associated-ode", "--P", path.to_str().unwrap()]);
    assert_eq!(v["n"], 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| dcsa(args).status.code();
    // Negative verdicts are successes.
    assert_eq!(code(&["ideals", "--P", JORDAN]), Some(0));
    assert_eq!(code(&["split-check", "--P", EX35, "--Z", r#"[["1","0"],["0","1"]]"#]), Some(0));
    // Outside the supported class.
    assert_eq!(code(&["solve", "--P", r#"[["1/(x^2+1)"]]"#, "--column"]), Some(2));
    assert_eq!(code(&["ideals", "--P", r#"[["0","0"],["1","0"]]"#]), Some(2));
    assert_eq!(code(&["classify", "--P", JORDAN]), Some(2));
    assert_eq!(code(&["solve", "--P", JORDAN]), Some(2));
    assert_eq!(code(&["tensor-power", "--P", r#"[["0","0","0"],["0","0","0"],["0","0","0"]]"#, "--power", "3"]), Some(2));
    // Parse and IO errors.
    assert_eq!(code(&["solve", "--P", r#"[["1/"]]"#]), Some(1));
    assert_eq!(code(&["solve", "--P", r#"[["0","1"]]"#]), Some(1));
    assert_eq!(code(&["solve", "--P", "[[0"]), Some(1));
    assert_eq!(code(&["solve", "--P", "/nonexistent/p.json"]), Some(1));
    assert_eq!(code(&["gauge-check", "--P", EX35, "--m", r#"[["1","1"],["1","1"]]"#]), Some(1));
}

#[test]
fn text_output_mentions_verdicts() {
    let out = dcsa(&["ideals", "--P", JORDAN]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("reductive: false"));
}
