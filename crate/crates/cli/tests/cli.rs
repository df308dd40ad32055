use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn oqrw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oqrw")).args(args).output().unwrap()
}

fn oqrw_threads(threads: &str, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oqrw"))
        .env("OQRW_THREADS", threads)
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn dist_both_reports_ex5_law() {
    let v = json(&oqrw(&["dist", "--example", "ex5", "--steps", "4", "--method", "both", "--format", "json"]));
    assert!(v["comparison"]["max_abs"].as_f64().unwrap() <= 1e-12);
    for (x, p) in [("-4", 1.0), ("-2", 2.0), ("0", 3.0), ("2", 2.0), ("4", 1.0)] {
        assert!((v["distribution"][x].as_f64().unwrap() - p / 9.0).abs() < 1e-12);
    }
}

#[test]
fn dist_csv_output() {
    let out = oqrw(&["dist", "--example", "ex1:p=0.5", "--steps", "2", "--rho0-diag", "0,1", "--method", "lattice"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,p"));
    let rows: Vec<(i64, f64)> = lines
        .map(|l| {
            let (x, p) = l.split_once(',').unwrap();
            (x.parse().unwrap(), p.parse().unwrap())
        })
        .collect();
    let expected = [(-2, 0.25), (0, 0.5), (2, 0.25)];
    assert_eq!(rows.len(), 3);
    for ((x, p), (ex, ep)) in rows.iter().zip(expected) {
        assert_eq!(*x, ex);
        assert!((p - ep).abs() < 1e-15);
    }
}

#[test]
fn every_method_agrees_on_ex5() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for method in ["lattice", "dual", "cut_unfold"] {
        let f = dir.path().join(format!("{method}.csv"));
        let out = oqrw(&["dist", "--example", "ex5", "--steps", "9", "--method", method, "-o", path(&f)]);
        assert!(out.status.success());
        files.push(f);
    }
    for f in &files[1..] {
        let v = json(&oqrw(&["compare", path(&files[0]), path(f)]));
        assert!(v["max_abs"].as_f64().unwrap() < 1e-12);
    }
}

#[test]
fn compare_point_masses() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    std::fs::write(&a, "x,p\n0,1.0\n").unwrap();
    std::fs::write(&b, "x,p\n1,1.0\n").unwrap();
    let v = json(&oqrw(&["compare", path(&a), path(&b)]));
    assert_eq!(v["max_abs"], 1.0);
    assert_eq!(v["tv_distance"], 1.0);
    let v = json(&oqrw(&["compare", path(&a), path(&a)]));
    assert_eq!(v["max_abs"], 0.0);
}

#[test]
fn clt_reports() {
    let v = json(&oqrw(&["clt", "--example", "ex3"]));
    assert!((v["m"].as_f64().unwrap() + 1.0).abs() < 1e-9);
    assert!(v["sigma2"].as_f64().unwrap().abs() < 1e-9);
    let v = json(&oqrw(&["clt", "--example", "ex5"]));
    assert!((v["sigma2"].as_f64().unwrap() - 8.0 / 9.0).abs() < 1e-9);
    assert_eq!(v["fixed_space_dim"], 1);
    let out = oqrw(&["clt", "--example", "ex1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn validation_errors_exit_with_two() {
    for args in [
        vec!["dist", "--example", "ex5", "--steps", "-1"],
        vec!["dist", "--example", "ex6", "--steps", "3"],
        vec!["dist", "--example", "ex1:q=0.3", "--steps", "3"],
        vec!["dist", "--example", "ex5"],
        vec!["dist", "--example", "ex5", "--steps", "3", "--method", "closed_form"],
        vec!["dist", "--example", "ex5", "--steps", "3", "--method", "trajectory"],
        vec!["dist", "--example", "ex5", "--steps", "15", "--method", "cut_unfold"],
        vec!["dist", "--example", "ex5", "--steps", "3", "--rho0-diag", "0.7,0.7"],
        vec!["asym", "--example", "ex1", "--n", "3"],
    ] {
        assert_eq!(oqrw(&args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(oqrw_threads("zero", &["clt", "--example", "ex5"]).status.code(), Some(2));
}

#[test]
fn init_example_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    let out = oqrw(&["init-example", "ex4:eps=0.2,theta=1.1", "--steps", "12", "--method", "both", "--rho0-diag", "0.3,0.7", "--write", path(&cfg)]);
    assert!(out.status.success());
    let first = std::fs::read_to_string(&cfg).unwrap();
    // reparse through the config path and write again
    let again = oqrw(&["init-example", "ex4:eps=0.2,theta=1.1", "--config", path(&cfg)]);
    assert_eq!(String::from_utf8(again.stdout).unwrap(), first);
    let v = json(&oqrw(&["dist", "--config", path(&cfg), "--format", "json"]));
    assert!(v["comparison"]["max_abs"].as_f64().unwrap() < 1e-12);
    assert_eq!(v["steps"], 12);
}

#[test]
fn sample_is_reproducible_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let run = |threads: &str, name: &str| {
        let csv = dir.path().join(name);
        let out = oqrw_threads(threads, &["sample", "--example", "ex5", "--steps", "20", "--traj", "20000", "--seed", "42", "--csv", path(&csv)]);
        assert!(out.status.success());
        (out.stdout, std::fs::read(&csv).unwrap())
    };
    let (j1, c1) = run("1", "one.csv");
    let (j4, c4) = run("4", "four.csv");
    assert_eq!(j1, j4);
    assert_eq!(c1, c4);
    let v: Value = serde_json::from_slice(&j1).unwrap();
    assert_eq!(v["n_traj"], 20000);
    assert!(v["variance"].as_f64().unwrap() > 0.0);
}

#[test]
fn asym_table() {
    let out = oqrw(&["asym", "--example", "ex5", "--n", "50"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,p,alpha,ratio,limit"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 201);
    let centre = rows.iter().find(|r| r[0] == 0.0).unwrap();
    assert!((centre[3] * std::f64::consts::PI - 1.0).abs() < 0.05);
}
