//! End-to-end runs of the `crw` binary.

use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn crw(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crw"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok_json(dir: &Path, args: &[&str]) -> Value {
    let out = crw(dir, args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    if out.stdout.is_empty() {
        // written to --out
        return Value::Null;
    }
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &[][..],
        &["frobnicate"],
        &["gen", "torus"],
        &["simulate", "--graph", "g.json"],
        &["bench", "--family", "complete"],
        &["gen", "complete", "4", "--format", "xml"],
    ] {
        assert_eq!(crw(dir.path(), args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn module_errors_exit_one_with_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = crw(dir.path(), &["hit-exact", "--graph", "missing.json", "--target", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "io");

    // a bad argument value is a usage error
    ok_json(dir.path(), &["gen", "path", "4", "--out", "p.json"]);
    let out = crw(dir.path(), &["hit-exact", "--graph", "p.json", "--target", "9"]);
    assert_eq!(out.status.code(), Some(2));

    std::fs::write(dir.path().join("split.txt"), "4 2\n0 1\n2 3\n").unwrap();
    let out = crw(dir.path(), &["hit-exact", "--graph", "split.txt", "--target", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["message"].as_str().unwrap().contains("connected"), "{err}");
}

#[test]
fn bull_labels_from_the_command_line() {
    let dir = tempfile::tempdir().unwrap();
    ok_json(dir.path(), &["gen", "bull", "--out", "bull.json"]);
    let v = ok_json(dir.path(), &["hit-exact", "--graph", "bull.json", "--target", "4"]);
    let label = |from: u64, to: u64| {
        v["transitions"]
            .as_array()
            .unwrap()
            .iter()
            .find(|t| t["from"] == from && t["to"] == to)
            .map(|t| t["label"].as_str().unwrap().to_string())
    };
    assert_eq!(label(0, 1).as_deref(), Some("1"));
    assert_eq!(label(1, 3).as_deref(), Some("5/9"));
    assert_eq!(label(1, 2).as_deref(), Some("3/9"));
    assert_eq!(label(1, 0).as_deref(), Some("1/9"));
    assert_eq!(label(2, 3).as_deref(), Some("3/4"));
    assert_eq!(label(2, 1).as_deref(), Some("1/4"));
}

#[test]
fn triangle_hitting_is_four_thirds() {
    let dir = tempfile::tempdir().unwrap();
    ok_json(dir.path(), &["gen", "complete", "3", "--out", "k3.json"]);
    let v = ok_json(dir.path(), &["hit-exact", "--graph", "k3.json", "--target", "0"]);
    for u in [1, 2] {
        assert!((v["h"][u].as_f64().unwrap() - 4.0 / 3.0).abs() < 1e-12);
    }
}

#[test]
fn manifest_is_written_next_to_output() {
    let dir = tempfile::tempdir().unwrap();
    ok_json(dir.path(), &["gen", "cycle", "6", "--out", "c.json"]);
    let out = crw(
        dir.path(),
        &[
            "--seed",
            "9",
            "--threads",
            "2",
            "simulate",
            "--graph",
            "c.json",
            "--cover",
            "--trials",
            "50",
            "--out",
            "sim.json",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let m: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("sim.json.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["command"], "simulate");
    assert_eq!(m["seed"], 9);
    assert_eq!(m["threads"], 2);
    assert!(m["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .any(|o| o.as_str().unwrap().ends_with("sim.json")));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("sim.json")).unwrap()).unwrap();
    assert_eq!(report["trials"], 50);
}

#[test]
fn same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    ok_json(dir.path(), &["gen", "regular", "30", "3", "--out", "r.json"]);
    let run = |threads: &str| {
        crw(
            dir.path(),
            &[
                "--threads",
                threads,
                "simulate",
                "--graph",
                "r.json",
                "--strategy",
                "greedy-uncovered",
                "--cover",
                "--trials",
                "200",
            ],
        )
        .stdout
    };
    let a = run("1");
    assert_eq!(a, run("1"));
    assert_eq!(a, run("3"));
    let other = crw(
        dir.path(),
        &[
            "--seed", "1", "simulate", "--graph", "r.json", "--cover", "--trials", "200",
        ],
    )
    .stdout;
    assert_ne!(a, other);
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = crw(
        dir.path(),
        &["bench", "--family", "complete,cycle", "--sizes", "6", "--trials", "20"],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("family,n,strategy,metric,mean,ci_lo,ci_hi,exact"));
    // two families, two default strategies, cover and hit each
    assert_eq!(lines.count(), 8);

    let out = crw(
        dir.path(),
        &[
            "--format",
            "json",
            "bench",
            "--family",
            "path",
            "--sizes",
            "5",
            "--strategies",
            "srw",
            "--trials",
            "20",
        ],
    );
    let rows: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 2);
}

#[test]
fn boost_reports_both_walks() {
    let dir = tempfile::tempdir().unwrap();
    ok_json(dir.path(), &["gen", "complete", "5", "--out", "k5.json"]);
    let v = ok_json(
        dir.path(),
        &["boost", "--graph", "k5.json", "--start", "0", "--event", "hit:4:1"],
    );
    // one step: 1 - (3/4)^2 for the CRW, 1/4 for the SRW
    assert!((v["q"].as_f64().unwrap() - 7.0 / 16.0).abs() < 1e-12);
    assert!((v["p"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert!(v["margin"].as_f64().unwrap() >= -1e-12);
    let v = ok_json(
        dir.path(),
        &["boost", "--graph", "k5.json", "--event", "hit:4:1", "--mode", "min"],
    );
    assert!((v["q"].as_f64().unwrap() - 1.0 / 16.0).abs() < 1e-12);
    assert_eq!(
        crw(dir.path(), &["boost", "--graph", "k5.json", "--event", "soon:4"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn strategy_file_feeds_simulate() {
    let dir = tempfile::tempdir().unwrap();
    ok_json(dir.path(), &["gen", "bull", "--out", "bull.json"]);
    ok_json(
        dir.path(),
        &[
            "strategy",
            "optimal",
            "--graph",
            "bull.json",
            "--target",
            "4",
            "--out",
            "opt.json",
        ],
    );
    let exact = ok_json(dir.path(), &["hit-exact", "--graph", "bull.json", "--target", "4"]);
    let mc = ok_json(
        dir.path(),
        &[
            "simulate",
            "--graph",
            "bull.json",
            "--strategy",
            "opt.json",
            "--target",
            "4",
            "--trials",
            "4000",
        ],
    );
    let h0 = exact["h"][0].as_f64().unwrap();
    let half = (mc["ci_high"].as_f64().unwrap() - mc["ci_low"].as_f64().unwrap()) / 2.0;
    assert!((mc["mean"].as_f64().unwrap() - h0).abs() <= 1.5 * half, "{mc} vs {h0}");
}

#[test]
fn edge_list_round_trip_and_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let out = crw(dir.path(), &["gen", "cycle", "4", "--edge-list"]);
    assert_eq!(out.status.code(), Some(0));
    std::fs::write(dir.path().join("c4.txt"), &out.stdout).unwrap();
    let v = ok_json(dir.path(), &["spectrum", "--graph", "c4.txt"]);
    assert!((v["lambda2"].as_f64().unwrap() - 0.5).abs() < 1e-9, "{v}");
    let v = ok_json(dir.path(), &["cover-mdp", "--graph", "c4.txt", "--start", "0"]);
    assert!(v["expected_cover"].as_f64().unwrap() >= 3.0);
}
