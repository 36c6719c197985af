use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn hexlink(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hexlink")).args(args).env_remove("HEXLINK_SEED").output().expect("run hexlink")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = hexlink(args);
    assert!(o.status.success(), "{args:?} failed: {}", stderr(&o));
    stdout(&o)
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&ok(args)).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn bricard_report_shows_quads_bonds_and_families() {
    let out = ok(&["analyze", path(&data("bricard.json"))]);
    for needle in [
        "x^2 + 144",
        "x^2 - 1649/4",
        "maximal bond diagram (upper bound): 1-4:4,2-5:4,3-6:4",
        "bricard orthogonal: yes",
        "family 1: yes",
        "family 2: yes",
        "b_1^2+b_3^2+b_5^2 = b_2^2+b_4^2+b_6^2  1649  1649  0",
        "Genus bound: 5",
    ] {
        assert!(out.contains(needle), "missing '{needle}' in\n{out}");
    }
}

#[test]
fn json_report_is_parseable_and_reproducible() {
    let file = data("bricard.json");
    let args = ["analyze", path(&file), "--json"];
    let first = ok(&args);
    assert_eq!(first, ok(&args));
    let v: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["backend"], "exact");
    assert_eq!(v["flags"]["bricard_orthogonal"], true);
    assert_eq!(v["flags"]["family2"], true);
    assert_eq!(v["genus"]["bound"], 5);
    assert_eq!(v["maximal_bond_diagram"]["diagram"], "1-4:4,2-5:4,3-6:4");
    let bonds = v["bond_conditions"].as_array().unwrap();
    assert_eq!(bonds.len(), 6);
    assert!(bonds.iter().all(|b| b["gcd_degree"] == 2));
    assert_eq!(v["invariant_quads"]["plus"][0]["a0"]["re"], "144");
    assert_eq!(v["invariant_quads"]["plus"][2]["a0"]["re"], "-1649/4");
    // Flags are recomputable from the printed equations.
    for (name, check) in v["families"].as_object().unwrap() {
        let all = check["equations"].as_array().unwrap().iter().all(|e| e["holds"] == true && e["residual"] == "0");
        assert_eq!(check["holds"].as_bool().unwrap(), all, "{name}");
    }
}

#[test]
fn generic_lines_have_no_bonds_or_families() {
    let v = json(&["analyze", path(&data("generic_lines.json")), "--json"]);
    assert_eq!(v["input"], "lines");
    assert_eq!(v["maximal_bond_diagram"]["diagram"], "");
    assert!(v["flags"].as_object().unwrap().values().all(|f| f == false));
    assert_eq!(v["elimination_check"]["matches_closed_form"], true);
    assert_eq!(v["coupling_dimensions"], serde_json::json!([8, 8, 8, 8, 8, 8]));
    let f = json(&["classify", path(&data("generic_lines.json")), "--float", "--json"]);
    assert_eq!(f["flags"], v["flags"]);
}

#[test]
fn validation_errors_exit_with_code_two() {
    let o = hexlink(&["analyze", path(&data("parallel.json"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("adjacent axes parallel at joint 1"), "{}", stderr(&o));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"dh": {"c": [0, 0, 0, 0, 0, 0], "b": [0, 0, 0, 0, 0], "s": [0, 0, 0, 0, 0, 0]}}"#).unwrap();
    let o = hexlink(&["classify", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("dh.b: expected 6 entries, found 5"));

    std::fs::write(&bad, "not json").unwrap();
    assert_eq!(hexlink(&["analyze", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(hexlink(&["analyze", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(hexlink(&["analyze", path(&data("bricard.json")), "--exact", "--float"]).status.code(), Some(2));
}

#[test]
fn bricard_motion_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("motion.csv");
    let tol = 1e-9;
    ok(&["sample-motion", path(&data("bricard.json")), "--steps", "200", "--tol", "1e-9", "--out", csv.to_str().unwrap()]);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("step,t1,t2,t3,t4,t5,t6,residual,jac_rank"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert!(rows.len() >= 50, "{} rows", rows.len());
    for r in &rows {
        assert_eq!(r.len(), 9);
        assert!(r[7] < tol);
        assert!(r[1..7].iter().all(|a| a.abs() <= std::f64::consts::PI + 1e-12));
    }
}

#[test]
fn rigid_linkage_gives_header_only_and_a_warning() {
    let o = hexlink(&["sample-motion", path(&data("generic_lines.json"))]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "step,t1,t2,t3,t4,t5,t6,residual,jac_rank\n");
    assert!(stderr(&o).contains("warning: no motion found"));
}

#[test]
fn tracker_settings_are_validated() {
    for args in [["--steps", "0"], ["--tol", "-1"], ["--step-size", "0"]] {
        let o = hexlink(&["sample-motion", path(&data("bricard.json")), args[0], args[1]]);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn coupler_degree_examples() {
    let degree = |d: &str, p: &str| ok(&["coupler-degree", "--diagram", d, "--pair", p]).trim().parse::<i64>().unwrap();
    assert_eq!(degree("1-4:1,2-5:1", "3,5"), 2);
    assert_eq!(degree("", "1,4"), 0);
    assert_eq!(degree("1-4:2,2-5:2,3-6:2", "1,4"), 6);
    assert_eq!(degree("1-4:4,2-5:4,3-6:4", "2,5"), 12);
    assert_eq!(degree("1-4:4,2-5:4,3-6:4", "2,3"), 4);
    for (d, p) in [("1-4", "1,4"), ("1-2:1", "1,4"), ("1-4:1,4-1:1", "1,4"), ("1-4:1", "1,1"), ("1-4:1", "1,9")] {
        let o = hexlink(&["coupler-degree", "--diagram", d, "--pair", p]);
        assert_eq!(o.status.code(), Some(2), "{d} {p}");
    }
}

#[test]
fn seed_variable_drives_elimination() {
    let file = data("generic_lines.json");
    let run = |seed: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_hexlink"));
        c.args(["quadpoly", path(&file), "--elim", "--json"]).env_remove("HEXLINK_SEED");
        if let Some(s) = seed {
            c.env("HEXLINK_SEED", s);
        }
        c.output().unwrap()
    };
    let a: Value = serde_json::from_slice(&run(Some("5")).stdout).unwrap();
    assert_eq!(a["seed"], 5);
    assert_eq!(a["matches_closed_form"], true);
    let b: Value = serde_json::from_slice(&run(None).stdout).unwrap();
    assert_eq!(a["invariant_quads"], b["invariant_quads"]);
    assert_eq!(run(Some("abc")).status.code(), Some(2));
}

#[test]
fn elimination_on_an_open_dh_chain_is_refused_exactly() {
    let o = hexlink(&["quadpoly", path(&data("bricard.json")), "--elim"]);
    assert_eq!(o.status.code(), Some(2));
    let v = json(&["quadpoly", path(&data("bricard.json")), "--elim", "--float", "--json"]);
    assert_eq!(v["matches_closed_form"], true);
    assert_eq!(v["maximal_bond_diagram"], "1-4:4,2-5:4,3-6:4");
}

#[test]
fn synthesized_lines_reproduce_the_dh_table() {
    let dir = tempfile::tempdir().unwrap();
    let lines = dir.path().join("lines.json");
    let o = hexlink(&["synth", path(&data("bricard.json")), "--out", lines.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&["analyze", lines.to_str().unwrap(), "--float", "--json"]);
    assert_eq!(v["input"], "lines");
    let b = [0.0, 40.0, 32.0, 0.0, 25.0, 7.0];
    for i in 0..6 {
        let get = |k: &str| v["dh"][k][i].as_f64().unwrap();
        assert!(get("c").abs() < 1e-12);
        assert!((get("b") - b[i]).abs() < 1e-12);
        assert!(get("s").abs() < 1e-12);
    }
    assert_eq!(v["flags"]["bricard_orthogonal"], true);
    let o = hexlink(&["synth", path(&data("bricard.json")), "--exact"]);
    assert_eq!(o.status.code(), Some(2));
    let o = hexlink(&["synth", path(&data("generic_lines.json"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn motion_witness_in_the_report() {
    let v = json(&["analyze", path(&data("bricard.json")), "--float", "--motion", "--json"]);
    assert_eq!(v["motion"]["verdict"], "mobility one");
    assert!(v["motion"]["samples"].as_u64().unwrap() >= 50);
}
