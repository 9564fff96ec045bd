use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hanner_core::inequality::{sample_instance, Checker, Family, Instance};
use hanner_core::io::{instance_to_json, read_reports_json, InstanceFile};
use hanner_core::rng::SplitMix64;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hanner-lab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn verify_random_block_instance_holds() {
    let dir = tempfile::tempdir().unwrap();
    let Instance::Block(bm) = sample_instance(Checker::Theorem1, Family::General, &mut SplitMix64::new(7)).unwrap()
    else {
        panic!("block sample expected")
    };
    let inst = write(&dir, "t1.json", &instance_to_json(&InstanceFile::Block(bm)));
    let out = dir.path().join("r.json");
    let o = run(&["verify", "--instance", inst.to_str().unwrap(), "--p", "1,1.5,2,3", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let reports = read_reports_json(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(reports.len(), 4);
    assert!(reports.iter().all(|r| r.holds && r.name.contains("theorem1")));
}

#[test]
fn verify_psd_instance_runs_pair_checks() {
    let o = run(&["verify", "--instance", data("psd_example.json").to_str().unwrap(), "--p", "1.3,3"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let reports = read_reports_json(&String::from_utf8(o.stdout).unwrap()).unwrap();
    // theorem1, pos_block, theorem2 and six pairs at each p
    assert_eq!(reports.len(), 2 * (3 + 6));
}

#[test]
fn forced_psd_checker_on_non_psd_instance_is_a_usage_error() {
    let f = data("first_counterexample.json");
    let o = run(&["verify", "--instance", f.to_str().unwrap(), "--checker", "theorem2-forced"]);
    assert_eq!(code(&o), 1);
    let e = stderr(&o);
    assert!(e.contains("not positive semidefinite at index 1"), "{e}");
    assert!(o.stdout.is_empty());
}

#[test]
fn ordering_violation_exits_two() {
    let f = data("second_counterexample.json");
    let o = run(&["verify", "--instance", f.to_str().unwrap(), "--checker", "sing_ordering", "--p", "1.5"]);
    assert_eq!(code(&o), 2);
    let o = run(&["verify", "--instance", f.to_str().unwrap(), "--checker", "sing_ordering", "--p", "2"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn malformed_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(&dir, "bad.json", "{\"n\": 2, \"a\": [1, 2]");
    let o = run(&["verify", "--instance", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let short = write(&dir, "short.json", r#"{"n": 2, "a": [1, 2], "b": [1], "c": [[0, 0], [0, 0]]}"#);
    let o = run(&["verify", "--instance", short.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("b: expected 2 entries"));
    for args in [&["verify"][..], &["fuzz", "--trials", "0"], &["fuzz", "--p", "0.9"], &["nonsense"]] {
        assert_eq!(code(&run(args)), 1, "{args:?}");
    }
}

#[test]
fn reproduce_reports_crossover_and_is_deterministic() {
    let a = run(&["reproduce"]);
    let b = run(&["reproduce"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let ps = v[0]["crossover"]["p_star"].as_f64().unwrap();
    assert!(ps > 1.15 && ps < 1.25, "{ps}");
    let second = v[1]["reports"].as_array().unwrap();
    let at2 = second.iter().find(|r| r["p"].as_f64() == Some(2.0)).unwrap();
    assert!(at2["margin"].as_f64().unwrap().abs() <= 1e-10 * 20.0);
    assert_eq!(v[1]["crossover"]["p_star"], "none");

    let c = run(&["reproduce", "--format", "csv"]);
    let text = String::from_utf8(c.stdout).unwrap();
    assert!(text.starts_with("name,p,"));
    assert!(text.lines().any(|l| l.starts_with("second:") && l.contains(",2,")));
}

#[test]
fn optimize_psd_confirms_sorted_minimum() {
    let f = data("psd_example.json");
    let o = run(&["optimize", "--instance", f.to_str().unwrap(), "--p", "1.4"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let r = &v[0];
    assert_eq!(r["objective"], "min");
    assert_eq!(r["psd"]["agrees"], true);
    let sing = r["psd"]["sing_value"].as_f64().unwrap();
    let best = r["psd"]["c_permutation"]["value"].as_f64().unwrap();
    assert!((sing - best).abs() <= 1e-10 * sing);
    assert!(r["psd"]["swap_sort"]["steps"].as_array().is_some());
    assert!(r["exhaustive"]["value"].as_f64().unwrap() <= sing * (1.0 + 1e-12));
}

#[test]
fn optimize_landscape_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("land.csv");
    let f = data("second_counterexample.json");
    let o = run(&["optimize", "--instance", f.to_str().unwrap(), "--p", "1.5", "--format", "csv", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = std::fs::read_to_string(out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("sigma_b,sigma_c,sigma_d,value"));
    assert_eq!(lines.count(), 8);
    let o = run(&["optimize", "--instance", f.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn explore_residuals_are_small() {
    let o = run(&["explore", "--p", "1.2,1.8", "--format", "csv"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        ["alpha", "beta", "h", "p", "F", "dF_dh", "residual"]
    );
    let mut n = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let res: f64 = rec[6].parse().unwrap();
        assert!(res.abs() <= 1e-9);
        n += 1;
    }
    assert!(n > 100);
}

#[test]
fn fuzz_theorem1_clean_and_deterministic() {
    let a = run(&["fuzz", "--trials", "10000", "--seed", "42"]);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    let b = run(&["fuzz", "--trials", "10000", "--seed", "42"]);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);
    assert_eq!(v["theorem_backed"], true);
}

#[test]
fn fuzz_unbacked_checker_does_not_fail_the_run() {
    let o = run(&["fuzz", "--checker", "sing_ordering", "--trials", "300", "--p", "1,1.5"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["theorem_backed"], false);
    assert!(!v["violations"].as_array().unwrap().is_empty());
}
