use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn gmrep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gmrep"))
        .args(args)
        .env_remove("GMREP_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

#[test]
fn eval_two_point_square_root() {
    let o = gmrep(&["eval", "--a", "2,1", "--z", "0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let direct = v["direct_value"]["re"].as_f64().unwrap();
    let repr = v["repr_value"]["re"].as_f64().unwrap();
    assert!((direct - 2f64.sqrt()).abs() < 1e-15);
    assert!((repr - direct).abs() < 1e-9);
    assert!(v["abs_error"].as_f64().unwrap() <= 1e-9);
    // Sorted order is reported.
    assert_eq!(v["sequence"], serde_json::json!([1.0, 2.0]));
}

#[test]
fn eval_constant_sequence_is_exact() {
    let o = gmrep(&["eval", "--a", "5,5,5", "--z", "1+1i"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in ["direct_value", "repr_value"] {
        assert_eq!(v[key]["re"].as_f64(), Some(6.0));
        assert_eq!(v[key]["im"].as_f64(), Some(1.0));
    }
    assert_eq!(v["abs_error"].as_f64(), Some(0.0));
}

#[test]
fn eval_on_cut_exits_2_and_names_the_cut() {
    let o = gmrep(&["eval", "--a", "1,2", "--z=-1.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("(-inf, -1]"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn config_errors_exit_1() {
    assert_eq!(gmrep(&["eval", "--a", "1,2"]).status.code(), Some(1));
    assert_eq!(
        gmrep(&["eval", "--a", "1,0", "--z", "1"]).status.code(),
        Some(1)
    );
    assert_eq!(
        gmrep(&["eval", "--a", "1,2", "--z", "1+"]).status.code(),
        Some(1)
    );
    assert_eq!(
        gmrep(&["gap", "--a", "1,2", "--bogus"]).status.code(),
        Some(1)
    );
    assert_eq!(
        gmrep(&["gap", "--a", "1,2", "--perturb-density", "0.1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        gmrep(&["contour", "--a", "1,2", "--z", "1", "--eps", "5", "--r", "2"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(gmrep(&["--help"]).status.code(), Some(0));
}

#[test]
fn density_of_constant_pair_is_header_only() {
    let o = gmrep(&["density", "--a", "3,3"]);
    assert_eq!(stdout(&o), "t,closed,numeric_eps,segment\n");
    let o = gmrep(&["density", "--a", "3,3", "--raw"]);
    assert_eq!(stdout(&o), "t,density,weighted_density,segment_index\n");
}

#[test]
fn density_columns_track_each_other() {
    let o = gmrep(&["density", "--a", "1,2,4", "--per-segment", "10"]);
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 20);
    for r in rows {
        assert!(r[0] > 0.0 && r[0] < 3.0);
        assert!((r[1] - r[2]).abs() < 1e-4);
        assert!(r[3] == 1.0 || r[3] == 2.0);
    }
}

#[test]
fn gap_for_one_two() {
    let o = gmrep(&["gap", "--a", "1,2"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("a,A,G,gap_direct,gap_repr"));
    let row = lines.next().unwrap();
    let cells: Vec<&str> = row.rsplitn(5, ',').collect();
    let (repr, direct): (f64, f64) = (cells[0].parse().unwrap(), cells[1].parse().unwrap());
    assert!((direct - 0.085_786_437_626_904_95).abs() < 1e-9);
    assert!((repr - direct).abs() < 1e-9);
}

#[test]
fn contour_json_matches_direct_value() {
    let o = gmrep(&["contour", "--a", "1,2", "--z", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let total = v["breakdown"]["total"]["re"].as_f64().unwrap();
    assert!((total - (2f64.sqrt() - 1.0)).abs() < 1e-3);
    assert!(v["abs_error"].as_f64().unwrap() < 1e-3);
}

#[test]
fn sweep_grid_is_accurate() {
    let o = gmrep(&["sweep", "--a", "1,2,3"]);
    let text = stdout(&o);
    assert!(text.starts_with("re_z,im_z,abs_error,quad_error\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 400);
    assert!(rows.iter().all(|r| r[2] <= 1e-8));
}

#[test]
fn sweep_skips_points_on_the_cut() {
    let o = gmrep(&[
        "sweep",
        "--a",
        "1",
        "--re-range=-3,1",
        "--im-range=-1,1",
        "--steps",
        "5",
    ]);
    assert_eq!(csv_rows(&stdout(&o)).len(), 22);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    for args in [
        &["sweep", "--a", "0.5,2,7", "--steps", "6"][..],
        &["density", "--a", "1,2,2,5"][..],
        &["verify", "--cases", "8", "--seed", "3"][..],
    ] {
        assert_eq!(gmrep(args).stdout, gmrep(args).stdout);
    }
}

#[test]
fn out_path_and_environment_directory() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gap.csv");
    let o = gmrep(&["gap", "--a", "1,2", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("a,A,G"));

    let o = Command::new(env!("CARGO_BIN_EXE_gmrep"))
        .args(["density", "--a", "1,3"])
        .env("GMREP_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(Path::new(&dir.path().join("density.csv")).exists());
}

#[test]
fn unwritable_output_exits_5() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.csv");
    let o = gmrep(&["gap", "--a", "1,2", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn verify_forced_constant_passes_with_zero_gap() {
    let o = gmrep(&["verify", "--seed", "42", "--cases", "1", "--a", "2,2,2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], Value::Bool(true));
    let gap = v["suites"]
        .as_array()
        .unwrap()
        .iter()
        .find(|s| s["suite"] == "representation.am_gm")
        .unwrap();
    assert_eq!(gap["max_error"].as_f64(), Some(0.0));
}

#[test]
fn verify_detects_injected_fault() {
    let o = gmrep(&[
        "verify",
        "--cases",
        "10",
        "--perturb-density",
        "1e-3",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(4));
    let text = stdout(&o);
    let line = text
        .lines()
        .find(|l| l.starts_with("representation.oracle_equivalence"))
        .unwrap();
    assert!(line.contains(",false,"), "{line}");
    assert!(stderr(&o).contains("oracle_equivalence"));
}

#[test]
fn verify_report_has_every_suite() {
    let o = gmrep(&["verify", "--cases", "4"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let names: Vec<&str> = v["suites"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["suite"].as_str().unwrap())
        .collect();
    for prefix in [
        "mean_core.",
        "boundary.",
        "quadrature.",
        "representation.",
        "contour.",
    ] {
        assert!(names.iter().any(|n| n.starts_with(prefix)), "{prefix}");
    }
    // Failures empty iff passed.
    for s in v["suites"].as_array().unwrap() {
        assert_eq!(
            s["passed"].as_bool().unwrap(),
            s["failures"].as_array().unwrap().is_empty()
        );
    }
}
