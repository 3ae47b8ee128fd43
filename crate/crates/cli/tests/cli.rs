use std::process::{Command, Output};

use serde_json::Value;
use skelcollar_core::potential::closed_form;
use skelcollar_core::exact::rat;
use skelcollar_core::LaurentPoly;

fn skelcollar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skelcollar"))
        .args(args)
        .env_remove("SKELCOLLAR_SEED")
        .output()
        .expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let o = skelcollar(&a);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn resolve_a1_is_single_minus_two_curve() {
    let v = json(&["resolve", "--n", "2", "--a", "1"]);
    assert_eq!(v["self_intersections"], serde_json::json!([-2]));
    assert_eq!(v["intersection_matrix"], serde_json::json!([[-2]]));
    assert_eq!(v["rays"].as_array().unwrap().len(), 1);
    assert_eq!(v["cone"].as_array().unwrap().len(), 2);
}

#[test]
fn output_is_deterministic() {
    for args in [&["duality", "--n", "5"][..], &["birmap", "--a", "2", "--b", "2"], &["skeleton", "--n", "4"]] {
        assert_eq!(skelcollar(args).stdout, skelcollar(args).stdout, "{args:?}");
    }
}

#[test]
fn duality_six_rows() {
    let o = skelcollar(&["duality", "--n", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = stdout(&o).lines().filter(|l| l.starts_with("L_")).count();
    assert_eq!(rows, 6);
}

#[test]
fn header_reports_seed_and_cutoff() {
    let o = Command::new(env!("CARGO_BIN_EXE_skelcollar"))
        .args(["ext1", "--n", "2", "--j", "2"])
        .env("SKELCOLLAR_SEED", "77")
        .output()
        .unwrap();
    assert!(stdout(&o).starts_with("# skelcollar ext1 seed=77 cutoff=4\n"));
    let s = stdout(&skelcollar(&["ext1", "--n", "2", "--j", "2", "--seed", "5", "--cutoff", "6"]));
    assert!(s.starts_with("# skelcollar ext1 seed=5 cutoff=6\n"), "{s}");
}

#[test]
fn potential_json_round_trips() {
    let v = json(&["potential", "--n", "4"]);
    let h: LaurentPoly = serde_json::from_value(v["h_poly"].clone()).unwrap();
    assert_eq!(h, closed_form(&[1, 2, 3, 4], &rat(2)));
    assert_eq!(v["residual"], "0");
    let v = json(&["potential", "--n", "2", "--weights", "3,5", "--kappa", "1/2"]);
    assert_eq!(v["h"], "-3/2*x1*y1 - 5/2*x2*y2 + c");
}

#[test]
fn svg_only_for_pictures() {
    let o = skelcollar(&["fan", "--n", "3", "--resolved", "--format", "svg"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("<svg"));
    let o = skelcollar(&["skeleton", "--n", "2", "--format", "svg"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_and_input_errors() {
    assert_eq!(skelcollar(&["skeleton"]).status.code(), Some(2));
    assert_eq!(skelcollar(&["skeleton", "--n", "2", "--weights", "1,1"]).status.code(), Some(1));
    assert_eq!(skelcollar(&["birstep", "--n", "3", "--j", "2"]).status.code(), Some(1));
}

#[test]
fn verification_failure_exit_code() {
    assert_eq!(skelcollar(&["duality", "--n", "3", "--def-s", "2"]).status.code(), Some(3));
    assert_eq!(skelcollar(&["collar", "iso", "--n", "3", "--j1", "1", "--j2", "2"]).status.code(), Some(0));
}

#[test]
fn splitting_from_matrix_file() {
    let z = |e: i64| LaurentPoly::monomial(rat(1), &[("z", e)]);
    let zu = LaurentPoly::monomial(rat(1), &[("z", 1), ("u", 1)]);
    let body = serde_json::json!({ "n": 1, "matrix": [[z(2), zu], [LaurentPoly::zero(), z(-2)]] });
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("splitting_in.json");
    std::fs::write(&path, body.to_string()).unwrap();
    let v = json(&["splitting", "--matrix", path.to_str().unwrap()]);
    assert_eq!(v["splitting_type"], 2);
    assert_eq!(v["c1"], 0);
    let missing = skelcollar(&["splitting", "--matrix", "/nonexistent/m.json"]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn report_written_to_file() {
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("pic.txt");
    let o = skelcollar(&["collar", "pic", "--n", "4", "-o", path.to_str().unwrap()]);
    assert!(o.status.success() && o.stdout.is_empty());
    let s = std::fs::read_to_string(&path).unwrap();
    assert!(s.contains("cyclic of order 4: true"));
}
