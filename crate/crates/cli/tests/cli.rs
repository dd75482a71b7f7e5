use std::f64::consts::{PI, SQRT_2};
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn elastica(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_elastica"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = elastica(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

fn energy_of(dir: &Path, file: &str) -> Value {
    json(&ok(dir, &["energy", file, "--manifest", "energy.manifest.json"]))
}

#[test]
fn pendant_file_has_the_pendant_energy() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["construct", "pendant", "--R", "20", "--n", "16001", "-o", "p.csv"]);
    let e = energy_of(dir.path(), "p.csv")["E"].as_f64().unwrap();
    assert!((e - 10.906581).abs() < 1e-5, "{e}");
}

#[test]
fn line_file_is_straight_with_zero_energy() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["construct", "line", "--length", "10", "-o", "line.csv"]);
    let text = std::fs::read_to_string(dir.path().join("line.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("s,x,y"));
    for row in lines {
        let y: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
        assert_eq!(y, 0.0);
    }
    assert_eq!(energy_of(dir.path(), "line.csv")["E"].as_f64(), Some(0.0));
}

#[test]
fn borderline_angle_energy() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["construct", "borderline-angle", "--phi", "1.5707963", "--R", "20", "-o", "b.csv"]);
    let e = energy_of(dir.path(), "b.csv")["E"].as_f64().unwrap();
    assert!((e - 8.0 * (PI / 8.0).sin().powi(2)).abs() < 1e-6, "{e}");
}

#[test]
fn serpent_energy_and_closed_identity_flag() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["construct", "serpent", "-o", "s.csv"]);
    let e = energy_of(dir.path(), "s.csv")["E"].as_f64().unwrap();
    assert!((e - (8.0 - 4.0 * SQRT_2)).abs() < 1e-8, "{e}");

    ok(dir.path(), &["construct", "two-teardrop", "-o", "t.csv"]);
    let r = energy_of(dir.path(), "t.csv");
    let (d, l) = (r["D"].as_f64().unwrap(), r["L"].as_f64().unwrap());
    assert!((d - l).abs() < 1e-8);
    assert_eq!(r["c0_closed_note"], "C0-closed identity holds");
}

#[test]
fn flow_of_a_line_stops_at_t_max_with_constant_energy() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["construct", "line", "--length", "10", "--n", "501", "-o", "line.csv"]);
    let summary = json(&ok(
        d,
        &["flow", "--input", "line.csv", "--n", "501", "--tmax", "0.01", "--log", "log.csv", "-o", "final.csv"],
    ));
    assert_eq!(summary["stop_reason"], "t_max");
    assert_eq!(summary["final_energy"], summary["initial_energy"]);
    let manifest = json(&std::fs::read_to_string(d.join("final.manifest.json")).unwrap());
    assert_eq!(manifest["stop_reason"], "t_max");
    for out in manifest["outputs"].as_array().unwrap() {
        assert!(d.join(out.as_str().unwrap()).exists(), "{out}");
    }
    let log = std::fs::read_to_string(d.join("log.csv")).unwrap();
    assert!(log.starts_with("t,E,B,D,min_tangent_e1,sup_curvature,event\n"));
    assert_eq!(log.lines().count(), 1 + 101);
}

#[test]
fn flow_of_eta_breaks_graphicality() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["construct", "eta", "--R", "16", "--rho", "0.1", "--alpha", "0.02", "--spacing", "1e-3", "-o", "eta.csv"]);
    let summary = json(&ok(
        d,
        &[
            "flow", "--input", "eta.csv", "--n", "32001", "--dt", "5e-14", "--tmax", "4e-12", "--stop",
            "graphicality", "--log", "log.csv", "-o", "final.csv",
        ],
    ));
    assert_eq!(summary["stop_reason"], "graphicality");
    let t = summary["events"][0]["t"].as_f64().unwrap();
    assert!(t > 0.0 && t < 4e-12, "{t}");
    let log = std::fs::read_to_string(d.join("log.csv")).unwrap();
    assert!(log.lines().last().unwrap().ends_with(",graphicality"));
}

#[test]
fn flow_below_threshold_has_no_events_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["construct", "bump", "--R", "10", "--n", "1001", "-o", "g.csv"]);
    let run = |tag: &str| {
        let summary = json(&ok(
            d,
            &[
                "flow", "--input", "g.csv", "--n", "1001", "--tmax", "0.02", "--stop", "graphicality,plateau",
                "--log", &format!("log{tag}.csv"), "-o", &format!("final{tag}.csv"),
            ],
        ));
        assert!(["t_max", "plateau"].contains(&summary["stop_reason"].as_str().unwrap()));
        assert!(summary["events"].as_array().unwrap().is_empty());
    };
    run("1");
    run("2");
    for stem in ["log", "final"] {
        let a = std::fs::read(d.join(format!("{stem}1.csv"))).unwrap();
        let b = std::fs::read(d.join(format!("{stem}2.csv"))).unwrap();
        assert_eq!(a, b, "{stem} differs between identical runs");
    }
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("run.cfg"), "# flow settings\nn = 301\ntmax = 0.001\ndt = 1e-4\n").unwrap();
    ok(d, &["construct", "line", "--length", "10", "--n", "301", "-o", "line.csv"]);
    let summary = json(&ok(
        d,
        &["flow", "--config", "run.cfg", "--input", "line.csv", "--tmax", "0.0005", "-o", "f.csv", "--log", "l.csv"],
    ));
    assert_eq!(summary["steps"], 5);
    let manifest = json(&std::fs::read_to_string(d.join("f.manifest.json")).unwrap());
    assert_eq!(manifest["config"]["n"], "301");
    assert_eq!(manifest["config"]["tmax"], "0.0005");
    assert_eq!(manifest["config"]["redistribute_every"], "5");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("bad.csv"), "s,x,y\n0,0,0\n1,zz,0\n").unwrap();
    let out = elastica(d, &["energy", "bad.csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    assert_eq!(elastica(d, &["no-such-command"]).status.code(), Some(1));
    assert_eq!(elastica(d, &["construct", "borderline-angle"]).status.code(), Some(1));
    assert_eq!(
        elastica(d, &["construct", "eta", "--rho", "0.5"]).status.code(),
        Some(1),
        "window wider than the serpent strip"
    );

    let rows: String = (0..8).map(|i| format!("{i},{},0\n", i.max(1))).collect();
    std::fs::write(d.join("dup.csv"), format!("s,x,y\n{rows}")).unwrap();
    assert_eq!(elastica(d, &["energy", "dup.csv"]).status.code(), Some(2));
}

#[test]
fn verify_constants_passes() {
    let dir = tempfile::tempdir().unwrap();
    let text = ok(dir.path(), &["verify", "constants", "-o", "checks.json"]);
    for name in ["teardrop modulus", "8 − 4√2", "pendant E", "two-teardrop 2LB", "figure-eight 2√(LB)", "7√2π/3"] {
        let line = text.lines().find(|l| l.contains(name)).unwrap_or_else(|| panic!("{name} missing"));
        assert!(line.ends_with("PASS"), "{line}");
    }
    assert!(dir.path().join("checks.manifest.json").exists());
}

#[test]
fn sweep_and_cut_paste() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let sweep = json(&ok(d, &["sweep", "--n", "40", "--seed", "11"]));
    assert!(sweep["violations"].as_array().unwrap().is_empty());
    assert!(d.join("elastica-sweep.manifest.json").exists());

    let eight = json(&ok(d, &["cut-paste", "--preset", "figure-eight", "--gap", "1.5", "-o", "eight.csv"]));
    assert!(eight["additivity_defect"].as_f64().unwrap() < 1e-8);

    ok(d, &["construct", "serpent", "-o", "s.csv"]);
    let glued = json(&ok(d, &["cut-paste", "--input", "s.csv", "--input", "s.csv", "--gaps", "2", "-o", "ss.csv"]));
    assert!((glued["E"].as_f64().unwrap() - 2.0 * (8.0 - 4.0 * SQRT_2)).abs() < 1e-7);
}
