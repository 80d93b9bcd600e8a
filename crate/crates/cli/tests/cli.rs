use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run_in(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quatforms"))
        .env("QUATFORMS_CACHE_DIR", cache)
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_in(cache: &Path, args: &[&str]) -> Value {
    let out = run_in(cache, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn t13_values(v: &Value) -> Vec<i64> {
    let mut xs: Vec<i64> = v["outputs"]["eigensystems"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["eigenvalues"]["T13"].as_str().unwrap().parse().unwrap())
        .collect();
    xs.sort();
    xs
}

#[test]
fn classset_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let a = json_in(dir.path(), &["classset", "--q", "5", "--M", "3"]);
    assert_eq!(a["outputs"]["h"], 2);
    assert_eq!(a["outputs"]["mass_ok"], true);
    assert_eq!(a["timings"]["cache"], "miss");
    let b = json_in(dir.path(), &["classset", "--q", "5", "--M", "3"]);
    assert_eq!(b["timings"]["cache"], "hit");
    assert_eq!(a["outputs"], b["outputs"]);
    let c = json_in(dir.path(), &["classset", "--q", "2", "--M", "1"]);
    assert_eq!(c["outputs"]["h"], 1);
}

#[test]
fn stale_cache_entries_are_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    json_in(dir.path(), &["classset", "--q", "7", "--M", "3"]);
    let file = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.extension().is_some_and(|x| x == "json"))
        .unwrap();
    std::fs::write(&file, "{\"version\": 0}").unwrap();
    let b = json_in(dir.path(), &["classset", "--q", "7", "--M", "3"]);
    assert_eq!(b["timings"]["cache"], "miss");
}

#[test]
fn hecke_t13() {
    let dir = tempfile::tempdir().unwrap();
    let a = json_in(dir.path(), &["hecke", "--q", "5", "--M", "3", "--k", "2", "--op", "T13"]);
    assert_eq!(t13_values(&a), vec![-2, 14]);
    let b = json_in(dir.path(), &["hecke", "--q", "7", "--M", "3", "--k", "2", "--op", "T13"]);
    assert!(t13_values(&b).contains(&14));
}

#[test]
fn usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad_ell = run_in(dir.path(), &["hecke", "--q", "5", "--M", "3", "--op", "T5"]);
    assert_eq!(bad_ell.status.code(), Some(2));
    let missing = run_in(dir.path(), &["hecke", "--q", "5", "--M", "3"]);
    assert_eq!(missing.status.code(), Some(2));
    let bad_weight = run_in(dir.path(), &["slopes", "--q", "5", "--M", "3", "--p", "3", "--weight", "x=1"]);
    assert_eq!(bad_weight.status.code(), Some(2));
    let no_seed = run_in(dir.path(), &["raise", "--q", "2", "--M", "1", "--p", "3", "--ell", "13", "--weights", "2"]);
    assert_eq!(no_seed.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&no_seed.stderr).contains("no p-ordinary cuspidal"));
}

#[test]
fn config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("q.toml");
    std::fs::write(&cfg, "precision = 5\ntruncation = 9\n").unwrap();
    let v = json_in(
        dir.path(),
        &["--config", cfg.to_str().unwrap(), "slopes", "--q", "5", "--M", "3", "--p", "3", "--weight", "k=2"],
    );
    assert_eq!(v["inputs"]["N"], 9);
    assert_eq!(v["inputs"]["m"], 5);
    std::fs::write(&cfg, "precision = 0\n").unwrap();
    let bad = run_in(dir.path(), &["--config", cfg.to_str().unwrap(), "colex", "--g", "1", "--N", "3"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn slopes_weight_two() {
    let dir = tempfile::tempdir().unwrap();
    let args = |n: &'static str, m: &'static str| {
        ["slopes", "--q", "5", "--M", "3", "--p", "3", "--weight", "k=2", "--N", n, "--prec", m]
    };
    let a = json_in(dir.path(), &args("15", "15"));
    let b = json_in(dir.path(), &args("20", "20"));
    assert_eq!(a["outputs"]["slope_zero_multiplicity"], 1);
    assert_eq!(a["outputs"]["unit_eigenvalues_mod_p"], serde_json::json!([2]));
    let cert = |v: &Value| -> Vec<Value> {
        v["outputs"]["segments"].as_array().unwrap().iter().filter(|s| s["certified"] == true).cloned().collect()
    };
    assert_eq!(cert(&a), cert(&b));
    let s = json_in(dir.path(), &["slopes", "--q", "5", "--M", "3", "--p", "3", "--weight", "s=1/2", "--N", "10"]);
    assert!(s["outputs"]["segments"].is_array());
}

#[test]
fn raise_tables() {
    let dir = tempfile::tempdir().unwrap();
    let v = json_in(dir.path(), &["raise", "--q", "5", "--M", "3", "--p", "3", "--ell", "13", "--weights", "2,4,10"]);
    let vals: Vec<Value> = v["outputs"]["valuations"].as_array().unwrap().iter().map(|r| r["valuation"].clone()).collect();
    let exact = |e: u32| serde_json::json!({ "exact": e });
    assert_eq!(vals, vec![exact(1), exact(2), exact(3)]);
    let w = json_in(dir.path(), &["raise", "--q", "7", "--M", "3", "--p", "3", "--ell", "13", "--weights", "2,4,6,8,10"]);
    assert!(w["outputs"]["valuations"].as_array().unwrap().iter().all(|r| r["valuation"] == exact(1)));
}

#[test]
fn colex_dims() {
    let dir = tempfile::tempdir().unwrap();
    for (g, n, want) in [("1", "6", 1), ("2", "3", 4), ("3", "2", 6)] {
        let v = json_in(dir.path(), &["colex", "--g", g, "--N", n]);
        assert_eq!(v["outputs"]["kernel_dim"], want);
        assert_eq!(v["outputs"]["boundary_count"], want);
        assert_eq!(v["outputs"]["boundary_only"], true);
    }
}

#[test]
fn deterministic_output() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--no-timings", "hecke", "--q", "5", "--M", "3", "--op", "T2,T7"];
    let a = run_in(dir.path(), &args);
    let b = run_in(dir.path(), &args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
