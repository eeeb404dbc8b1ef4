use std::path::Path;
use std::process::{Command, Output};

use modunits_cli::cache::Cache;
use modunits_cli::record::ResultRecord;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modunits")).env_remove("MODUNITS_CACHE_DIR").args(args).output().unwrap()
}

fn run_cached(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modunits")).env("MODUNITS_CACHE_DIR", dir).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn examples() {
    let o = run(&["classnum", "13"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "19\n");
    assert_eq!(stdout(&run(&["structure", "72"])), "[4, 12, 36, 144, 9146133360]\n");
    let b = stdout(&run(&["basis", "36"]));
    assert_eq!(b.lines().count(), 5);
    assert_eq!(b.lines().next(), Some("E1^(12)(3t)/E5^(12)(3t)"));
    assert_eq!(stdout(&run(&["basis", "13", "--generator", "7"])).lines().last(), Some("E4^13/E2^13"));
    assert_eq!(stdout(&run(&["primary", "125", "5"])), "(5)(5^2)^7(5^3)\n");
    assert!(stdout(&run(&["conjecture", "2", "6"])).ends_with("agrees\n"));
}

#[test]
fn table_check() {
    let o = run(&["table", "11..50", "--check"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("40/40 match\n"));
    let o = run(&["table", "5..=10"]);
    assert!(stdout(&o).lines().all(|l| l.contains("  1  []")));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["classnum", "4"]).status.code(), Some(2));
    assert_eq!(run(&["classnum", "x"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["table", "20..10"]).status.code(), Some(2));
    assert_eq!(run(&["table", "5..500"]).status.code(), Some(2));
    assert_eq!(run(&["primary", "36", "4"]).status.code(), Some(2));
    assert_eq!(run(&["basis", "36", "--generator", "5"]).status.code(), Some(2));
    assert_eq!(run(&["basis", "13", "--generator", "3"]).status.code(), Some(2));
    assert_eq!(run(&["qcheck", "13", "--trunc", "0"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

const INV36: [&str; 2] = ["4", "7812"];

#[test]
fn json_schema() {
    let o = run(&["--json", "structure", "36"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["n"], 36);
    assert_eq!(v["class_number"], "31248");
    assert_eq!(v["invariants"], serde_json::json!(INV36));
    let basis = v["basis"].as_array().unwrap();
    assert_eq!(basis.len(), 5);
    assert_eq!(basis[0]["level"], 12);
    assert_eq!(basis[0]["scale"], 3);
    assert_eq!(basis[0]["exponents"]["1"], 1);
    assert_eq!(basis[0]["exponents"]["5"], -1);
    for k in ["yu_vs_lattice", "orbit", "q_integrality"] {
        assert_eq!(v["checks"][k], true, "{k}");
    }
    assert!(v.get("meta").is_none());
    let t: Value = serde_json::from_slice(&run(&["--json", "--timings", "classnum", "20"]).stdout).unwrap();
    assert!(t["meta"]["lattice_us"].is_number());
}

#[test]
fn cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut levels: Vec<u64> = (0..10).map(|_| rng.gen_range(5..=90)).collect();
    levels.sort_unstable();
    levels.dedup();
    for n in levels {
        let n = n.to_string();
        for cmd in ["structure", "classnum"] {
            let fresh = run(&["--json", cmd, &n]);
            let first = run_cached(dir.path(), &["--json", cmd, &n]);
            let second = run_cached(dir.path(), &["--json", cmd, &n]);
            assert_eq!(fresh.stdout, first.stdout, "N={n}");
            assert_eq!(first.stdout, second.stdout, "N={n}");
            let bypass = run_cached(dir.path(), &["--no-cache", "--json", cmd, &n]);
            assert_eq!(bypass.stdout, second.stdout);
        }
    }
}

#[test]
fn generator_override_has_its_own_entry() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path());
    assert_ne!(cache.path(13, None), cache.path(13, Some(7)));
    run_cached(dir.path(), &["structure", "13", "--generator", "7"]);
    assert!(cache.load(13, Some(7)).is_some());
    assert!(cache.load(13, None).is_none());
}

#[test]
fn tampered_cache_reports_inconsistency() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path());
    let mut r = ResultRecord::compute(21, None).unwrap();
    r.checks.yu_vs_lattice = false;
    r.class_number_formula = Some("5".into());
    cache.store(&r).unwrap();
    let o = run_cached(dir.path(), &["classnum", "21"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("formula gives 5"));

    let mut r = ResultRecord::compute(22, None).unwrap();
    r.invariants = vec!["7".into()];
    cache.store(&r).unwrap();
    let o = run_cached(dir.path(), &["table", "20..22", "--check"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("2/3 match"));

    // unreadable entries are recomputed
    std::fs::write(cache.path(23, None), "{ not json").unwrap();
    let o = run_cached(dir.path(), &["classnum", "23"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(cache.load(23, None).unwrap().class_number, stdout(&o).trim());
}

#[test]
fn record_round_trips() {
    for n in [5u64, 13, 27, 36, 42] {
        let r = ResultRecord::compute(n, None).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        let back: ResultRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }
}

#[test]
fn qcheck_and_verify() {
    let o = run(&["qcheck", "13", "--trunc", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("E3^13/E6^13 = q^6*(1 - 13q^3 + O(q^4))"));
    let o = run(&["verify", "40"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("orbit: ok"));
    let v: Value = serde_json::from_slice(&run(&["--json", "qcheck", "20"]).stdout).unwrap();
    assert_eq!(v["ok"], true);
}
