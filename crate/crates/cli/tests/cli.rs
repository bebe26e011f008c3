use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn ysys(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ysys"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Vec<Value>) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let o = ysys(&full);
    let v: Value = serde_json::from_str(&stdout(&o)).expect("valid json");
    (
        o.status.code().unwrap(),
        v.as_array().expect("top-level array").clone(),
    )
}

#[test]
fn verify_e8_is_fifteen_halves() {
    let o = ysys(&["verify", "--type", "E8", "--variant", "a"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("PASS cf E8/A "), "{text}");
    assert!(text.contains("expected=15/2"));

    let (code, rows) = json(&["verify", "--type", "E8", "--variant", "a"]);
    assert_eq!(code, 0);
    assert_eq!(rows.len(), 1);
    let r = &rows[0];
    assert_eq!(r["instance"], "E8/A");
    assert_eq!(r["command"], "verify");
    assert_eq!(r["expected_num"], "15");
    assert_eq!(r["expected_den"], "2");
    assert_eq!(r["passed"], true);
    assert!((r["computed"].as_f64().unwrap() - 7.5).abs() < 1e-9);
}

#[test]
fn verify_tadpole_target() {
    let (code, rows) = json(&["verify", "--type", "T1", "--variant", "a"]);
    assert_eq!(code, 0);
    assert_eq!(
        (
            rows[0]["expected_num"].as_str(),
            rows[0]["expected_den"].as_str()
        ),
        (Some("3"), Some("5"))
    );
}

#[test]
fn json_records_have_exactly_the_report_fields() {
    let (_, rows) = json(&["verify", "--type", "B3", "--type", "G2"]);
    assert_eq!(rows.len(), 4);
    let mut keys: Vec<_> = rows[0].as_object().unwrap().keys().cloned().collect();
    keys.sort();
    assert_eq!(
        keys,
        [
            "command",
            "computed",
            "deviation",
            "expected_den",
            "expected_num",
            "instance",
            "passed"
        ]
    );
    let instances: Vec<_> = rows
        .iter()
        .map(|r| r["instance"].as_str().unwrap())
        .collect();
    assert_eq!(instances, ["B3/A", "B3/Aflat", "G2/A", "G2/Aflat"]);
    assert_eq!(rows[3]["expected_num"], "8");
    assert_eq!(rows[3]["expected_den"], "3");
}

#[test]
fn csv_has_header_and_fraction_columns() {
    let o = ysys(&[
        "verify",
        "--type",
        "B3",
        "--variant",
        "a",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("instance,command,computed,expected_num,expected_den,deviation,passed")
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "B3/A");
    assert_eq!((row[3], row[4], row[6]), ("15", "4", "true"));
    assert!(lines.next().is_none());
}

#[test]
fn verify_default_covers_every_instance() {
    let (code, rows) = json(&["verify"]);
    assert_eq!(code, 0);
    assert_eq!(rows.len(), 80);
}

#[test]
fn verify_all_passes() {
    let (code, rows) = json(&["verify", "--all"]);
    assert_eq!(code, 0);
    assert_eq!(rows.len(), 160);
    assert!(rows.iter().all(|r| r["passed"] == true));
}

#[test]
fn selected_checks() {
    let o = ysys(&[
        "verify", "--type", "C2", "--check", "folding", "--check", "flat",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("PASS folding C2/direct"));
    assert!(text.contains("PASS flat C2/direct"));

    let o = ysys(&["verify", "--type", "D5", "--check", "level", "--level", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS level D5/l=4"));
}

#[test]
fn impossible_tolerance_fails_with_exit_one() {
    let o = ysys(&["verify", "--type", "E8", "--tol", "1e-300"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["verify", "--type", "X3"],
        vec!["verify", "--type", "D3"],
        vec!["verify", "--variant", "b"],
        vec!["verify", "--tol", "-1"],
        vec!["verify", "--all", "--type", "A1"],
        vec!["solve"],
        vec!["solve", "--type", "A2", "--level", "1"],
        vec!["cluster"],
        vec!["cluster", "--preset", "hexagon"],
        vec!["verify", "--type", "A3", "--check", "folding"],
        vec!["frobnicate"],
    ] {
        assert_eq!(ysys(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn solve_rank_one() {
    let (code, rows) = json(&["solve", "--type", "A1", "--variant", "aflat"]);
    assert_eq!(code, 0);
    let q = rows[0]["computed"].as_f64().unwrap();
    assert!((q - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-12);
    assert_eq!(rows[0]["instance"], "A1/Aflat/Q1");
    assert!(rows[0]["expected_num"].is_null());

    let (_, rows) = json(&["solve", "--type", "A1", "--variant", "a"]);
    assert_eq!(rows[0]["computed"].as_f64(), Some(0.5));
}

#[test]
fn solve_level_grid() {
    let (code, rows) = json(&["solve", "--type", "A2", "--level", "3"]);
    assert_eq!(code, 0);
    assert_eq!(rows.len(), 4);
    for r in &rows {
        assert!(r["deviation"].as_f64().unwrap() <= 1e-12);
    }
    let o = ysys(&["solve", "--type", "B3", "--level", "3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn dynamics_a2() {
    let (code, rows) = json(&["dynamics", "--type", "A2", "--level", "2", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(rows.len(), 2);
    assert!(rows[0]["deviation"].as_f64().unwrap() <= 1e-8);
    assert_eq!(rows[1]["expected_num"], "12");
    assert!((rows[1]["computed"].as_f64().unwrap() - 12.0).abs() <= 1e-8);
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec![
            "dynamics", "--type", "D4", "--level", "3", "--seed", "11", "--format", "csv",
        ],
        vec![
            "cluster", "--preset", "pentagon", "--seed", "5", "--format", "json",
        ],
        vec!["verify", "--type", "F4", "--check", "flat"],
    ] {
        assert_eq!(ysys(&args).stdout, ysys(&args).stdout);
    }
    let a = ysys(&["dynamics", "--type", "A3", "--seed", "1"]).stdout;
    let b = ysys(&["dynamics", "--type", "A3", "--seed", "2"]).stdout;
    assert_ne!(a, b);
}

#[test]
fn cluster_presets() {
    let (code, rows) = json(&["cluster", "--preset", "rank1"]);
    assert_eq!(code, 0);
    assert_eq!(rows[0]["expected_num"], "1");
    assert!((rows[0]["computed"].as_f64().unwrap() - 1.0).abs() <= 1e-12);

    let o = ysys(&["cluster", "--preset", "pentagon"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("p=5 periodic=true"));

    let o = ysys(&["cluster", "--preset", "a1xa1"]);
    assert!(stdout(&o).contains("p=4 periodic=true n_minus=2"));
}

#[test]
fn cluster_from_matrix_file() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "0 1\n-1 0").unwrap();
    let path = f.path().to_str().unwrap();

    let o = ysys(&["cluster", "--b-matrix", path, "--sequence", "1,2,1,2,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("p=5 periodic=true"));

    // Four steps do not close the pentagon.
    let o = ysys(&["cluster", "--b-matrix", path, "--sequence", "1,2,1,2"]);
    assert_eq!(o.status.code(), Some(1));

    assert_eq!(
        ysys(&["cluster", "--b-matrix", path]).status.code(),
        Some(2)
    );
    assert_eq!(
        ysys(&["cluster", "--b-matrix", path, "--sequence", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        ysys(&["cluster", "--b-matrix", "/nonexistent", "--sequence", "1"])
            .status
            .code(),
        Some(2)
    );
}
