use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

use ma_secrecy::harness::mean_std;

fn run(dir: &Path, args: &[&str], config: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ma-secrecy"));
    cmd.args(args).arg("--out").arg(dir.join("out"));
    if let Some(text) = config {
        let path = dir.join("config.json");
        std::fs::write(&path, text).unwrap();
        cmd.arg("--config").arg(path);
    }
    cmd.output().unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join("out").join(name)).unwrap()
}

fn rows(csv: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = csv.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let body = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, body)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1e-12)
}

const GAMMA: &str = r#"{"trials": 12, "gamma_db": [0, 10, 20]}"#;
const REGION: &str = r#"{"trials": 12, "a_over_lambda": [2, 4]}"#;

#[test]
fn summary_is_recomputable_from_trials() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["sweep-gamma"], Some(GAMMA));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let (th, trials) = rows(&read(dir.path(), "trials.csv"));
    let (sh, summary) = rows(&read(dir.path(), "summary.csv"));
    assert_eq!(
        sh,
        [
            "axis_value",
            "ma_mean",
            "ma_std",
            "fpa_mean",
            "fpa_std",
            "infeasible_frac"
        ]
    );
    assert_eq!(trials.len(), 3 * 12);
    assert_eq!(summary.len(), 3);

    let mut groups: BTreeMap<String, Vec<&Vec<String>>> = BTreeMap::new();
    for r in &trials {
        groups.entry(r[0].clone()).or_default().push(r);
    }
    let num = |s: &str| s.parse::<f64>().unwrap();
    for s in &summary {
        let g = &groups[&s[0]];
        let ma: Vec<f64> = g.iter().map(|r| num(&r[column(&th, "ma_rate")])).collect();
        let fpa: Vec<f64> = g.iter().map(|r| num(&r[column(&th, "fpa_rate")])).collect();
        let infeasible = g.iter().filter(|r| r[column(&th, "ma_feasible")] == "0").count() as f64 / g.len() as f64;
        let (ma_mean, ma_std) = mean_std(&ma);
        let (fpa_mean, fpa_std) = mean_std(&fpa);
        assert!(close(num(&s[1]), ma_mean));
        assert!(close(num(&s[2]), ma_std));
        assert!(close(num(&s[3]), fpa_mean));
        assert!(close(num(&s[4]), fpa_std));
        assert!(close(num(&s[5]), infeasible));
    }
}

#[test]
fn region_sweep_keeps_fpa_fixed() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["sweep-region"], Some(REGION));
    assert!(out.status.success());
    let (th, trials) = rows(&read(dir.path(), "trials.csv"));
    let fpa = column(&th, "fpa_rate");
    let (at2, at4): (Vec<_>, Vec<_>) = trials.iter().partition(|r| r[0] == "2");
    assert_eq!(at2.len(), 12);
    for (a, b) in at2.iter().zip(&at4) {
        assert_eq!(a[fpa], b[fpa]);
        assert_eq!(a[column(&th, "seed")], b[column(&th, "seed")]);
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    for dir in [&a, &b] {
        assert!(run(dir.path(), &["sweep-gamma"], Some(GAMMA)).status.success());
    }
    for name in ["trials.csv", "summary.csv"] {
        assert_eq!(read(a.path(), name), read(b.path(), name));
    }
}

#[test]
fn convergence_writes_traces() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["convergence"], Some(r#"{"trials": 5}"#));
    assert!(out.status.success());
    let (header, body) = rows(&read(dir.path(), "trace.csv"));
    assert_eq!(header, ["seed", "iteration", "objective"]);
    assert_eq!(body.iter().filter(|r| r[1] == "0").count(), 5);
    let mut last: BTreeMap<&str, f64> = BTreeMap::new();
    for r in &body {
        let v: f64 = r[2].parse().unwrap();
        if let Some(prev) = last.insert(&r[0], v) {
            assert!(v >= prev);
        }
    }
}

#[test]
fn optimize_uses_defaults_without_config() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["optimize"], None);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("MA  channel power"));
    let layout = read(dir.path(), "layout.csv");
    assert_eq!(layout.lines().count(), 1 + 4);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let unknown = run(dir.path(), &["sweep-gamma"], Some(r#"{"trials": 5, "bogus": 1}"#));
    assert_eq!(unknown.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("bogus"));

    let invalid = run(dir.path(), &["optimize"], Some(r#"{"trials": 0}"#));
    assert_eq!(invalid.status.code(), Some(2));

    let missing = Command::new(env!("CARGO_BIN_EXE_ma-secrecy"))
        .args(["optimize", "--config"])
        .arg(dir.path().join("absent.json"))
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));

    let packing = run(dir.path(), &["optimize"], Some(r#"{"n": 100, "a_over_lambda": 1}"#));
    assert_eq!(packing.status.code(), Some(3));

    let wrong_optimizer = run(dir.path(), &["convergence"], Some(r#"{"optimizer": "bsum1d"}"#));
    assert_eq!(wrong_optimizer.status.code(), Some(2));
}
