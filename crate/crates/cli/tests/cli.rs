use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn dgs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dgs"))
        .args(args)
        .output()
        .expect("dgs runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--json", "-"]);
    let out = dgs(&all);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn real(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

#[test]
fn spectrum_of_fixtures() {
    let v = json(&["spectrum", "--fixture", "path:3"]);
    assert!(real(&v["e0"]).abs() < 1e-12);
    let v = json(&["spectrum", "--fixture", "star:3", "--deflate"]);
    assert!(real(&v["e0"]).abs() < 1e-12);
    assert!((real(&v["e1"]) - 1.0).abs() < 1e-8);
}

#[test]
fn spectrum_rejects_bad_graph_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.graph");
    fs::write(&path, "v 0 1 0\ne 0 0 1.0\n").unwrap();
    let out = dgs(&["spectrum", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));
}

#[test]
fn spectrum_reads_graph_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k2.graph");
    fs::write(&path, "# K2\nv a 1 0\nv b 1 0\ne a b 1.0\n").unwrap();
    let v = json(&["spectrum", path.to_str().unwrap(), "--deflate"]);
    assert!((real(&v["e1"]) - 2.0).abs() < 1e-8);
    assert!(v["ground_state"].get("a").is_some());
}

#[test]
fn supersolution_certificate() {
    let v = json(&[
        "supersol",
        "--fixture",
        "path:5",
        "-E",
        "-0.5",
        "--x0",
        "2",
        "-r",
        "1",
    ]);
    assert!(real(&v["min_slack"]) >= -1e-8);
    assert_eq!(real(&v["w"]["2"]), 1.0);
    assert_eq!(v["window"], serde_json::json!(["1", "2", "3"]));
}

#[test]
fn supersolution_error_paths() {
    let out = dgs(&["supersol", "--fixture", "path:5", "-E", "10", "--x0", "2"]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
    let out = dgs(&[
        "supersol",
        "--fixture",
        "path:5",
        "-E",
        "-0.5",
        "--x0",
        "99",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("invalid vertex"));
}

#[test]
fn harnack_reports() {
    let v = json(&[
        "harnack",
        "--fixture",
        "path:3",
        "-E",
        "0",
        "--window",
        "all",
    ]);
    assert_eq!(real(&v["constant"]), 2.0);
    assert_eq!(v["witness_path"], serde_json::json!(["0", "1", "2"]));
    let v = json(&["harnack", "--fixture", "path:3", "-E", "-1"]);
    assert_eq!(real(&v["constant"]), 6.0);
    let out = dgs(&["harnack", "--fixture", "path:17", "-E", "0.5"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("limit 16"));
}

#[test]
fn shnol_cos_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("cos.csv");
    let out = dgs(&[
        "shnol",
        "--fixture",
        "z:60",
        "--solution",
        "cos:1.0471975512",
        "-E",
        "1.0",
        "--max-radius",
        "40",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("spectral evidence"));
    let mut reader = csv::Reader::from_path(&csv).unwrap();
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        ["n", "norm", "p", "q", "quot_p", "quot_q", "weyl"]
    );
    let rows: Vec<Vec<f64>> = reader
        .records()
        .map(|r| r.unwrap().iter().map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 41);
    // Norms grow with the radius, and the quotient trend is downward.
    assert!(rows.windows(2).all(|w| w[1][1] >= w[0][1]));
    assert!(rows[40][4] < rows[10][4]);
}

#[test]
fn shnol_geometric_has_no_evidence() {
    let out = dgs(&[
        "shnol",
        "--fixture",
        "z:60",
        "--solution",
        "geometric:2",
        "-E",
        "-0.5",
        "--max-radius",
        "40",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("no spectral evidence"));
}

#[test]
fn shnol_json_and_bounded_run() {
    let v = json(&[
        "shnol",
        "--fixture",
        "z:80",
        "--solution",
        "cos:1.0471975511965976",
        "-E",
        "1",
        "--max-radius",
        "78",
        "--alphas",
        "0.5,0.1",
        "--deltas",
        "0.4,0.1",
    ]);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 79);
    for key in ["n", "norm", "p", "q", "quot_p", "quot_q", "weyl"] {
        assert!(rows[3].get(key).is_some(), "missing {key}");
    }
}

#[test]
fn shnol_rejects_inconsistent_energy() {
    let out = dgs(&[
        "shnol",
        "--fixture",
        "z:60",
        "--solution",
        "cos:1.0",
        "-E",
        "0.3",
        "--max-radius",
        "40",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("not a solution"), "{}", stderr(&out));
}

#[test]
fn gsr_checks() {
    let out = dgs(&["gsr-check", "--fixture", "path:8", "--trials", "100"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("pass"));
    let v = json(&[
        "gsr-check",
        "--fixture",
        "random:30:0.2",
        "--seed",
        "7",
        "-E",
        "-0.5",
    ]);
    assert_eq!(v["pass"], true);
    assert_eq!(v["supersolution"]["pass"], true);
    let out = dgs(&["gsr-check", "--fixture", "random:30:0.01", "--seed", "7"]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
}

#[test]
fn boundary_reports() {
    let v = json(&[
        "boundary",
        "--fixture",
        "path:3",
        "--set",
        "0,1",
        "--cheeger",
    ]);
    for key in ["mu_on_da", "mu_on_dac", "nu_on_da", "nu_on_dac"] {
        let m = v[key].as_object().unwrap();
        assert_eq!(m.len(), 1);
        assert!(m.values().all(|x| real(x) == 1.0));
    }
    assert_eq!(real(&v["cheeger"]["q1"]), 1.0);
    let v = json(&["boundary", "--fixture", "path:3", "--set", "all"]);
    assert!(v["mu_on_da"].as_object().unwrap().is_empty());
    let out = dgs(&[
        "boundary",
        "--fixture",
        "path:3",
        "--weight",
        "2",
        "--set",
        "0",
        "--cheeger",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&dgs(&["spectrum"])), 1);
    assert_eq!(code(&dgs(&["nonsense"])), 1);
    assert_eq!(code(&dgs(&["spectrum", "--fixture", "blob:3"])), 1);
    assert_eq!(code(&dgs(&["--help"])), 0);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("run{i}.json"));
        let out = dgs(&[
            "gsr-check",
            "--fixture",
            "random:20:0.3",
            "--seed",
            "11",
            "--measure",
            "uniform:0.5:2",
            "--json",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        outputs.push(fs::read(&path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}
