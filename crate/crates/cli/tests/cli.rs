use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lab(args: &[&str]) -> Output {
    lab_env(args, &[])
}

fn lab_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mcf-lab"));
    cmd.args(args).env_remove("MCF_LAB_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("spawn mcf-lab")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const WORKED: [&str; 8] = ["--p", "5", "--alpha", "32/5", "--beta", "26/5", "--depth", "10"];

#[test]
fn expand_worked_pair() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.json");
    let mut args = vec!["expand"];
    args.extend(WORKED);
    args.extend(["--out", out.to_str().unwrap()]);
    let o = lab(&args);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let t = json(&out);
    assert_eq!(t["status"], "Finite(2)");
    let steps = t["steps"].as_array().unwrap();
    let digits: Vec<(&str, &str)> = steps
        .iter()
        .map(|s| (s["a"].as_str().unwrap(), s["b"].as_str().unwrap()))
        .collect();
    assert_eq!(digits, [("7/5", "1/5"), ("1/5", "1/1")]);
    assert_eq!(steps[1]["K"], 1);
    assert_eq!(steps[1]["vVa"], "inf");
}

#[test]
fn bad_prime_is_usage_error() {
    let o = lab(&["expand", "--p", "4", "--alpha", "1", "--beta", "2"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("p must be an odd prime"));
    let o = lab(&["expand", "--p", "5", "--alpha", "1/0", "--beta", "2"]);
    assert_eq!(code(&o), 1);
    let o = lab(&["frobnicate"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn hensel_inputs() {
    // independent roots: the run hits the depth limit with a certified prefix
    let o = lab(&[
        "expand", "--p", "5", "--alpha", "root:-6,0,1@1@50", "--beta", "root:-11,0,1@1@50", "--depth", "6",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let t: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(t["status"], "DepthLimited");
    assert!(t["certified_prefix"].as_u64().unwrap() >= 1);

    // β = α + 1 stops exactly in exact arithmetic, which truncated inputs
    // cannot certify
    let o = lab(&[
        "expand", "--p", "5", "--alpha", "root:-6,0,1@1@50", "--beta", "root:-6,0,1@1@50+1", "--depth", "10",
    ]);
    assert_eq!(code(&o), 2);
    let t: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(t["status"], "PrecisionExhausted");
}

#[test]
fn trace_round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let trace = d.join("t.json");
    let o = lab(&[
        "expand", "--p", "7", "--alpha", "17/11", "--beta", "-5/13", "--depth", "30", "--out",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    for out in ["r1", "r2"] {
        let o = lab(&[
            "verify", "--trace", trace.to_str().unwrap(), "--suite", "all", "--out-dir",
            d.join(out).to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    }
    let mut names: Vec<_> = fs::read_dir(d.join("r1")).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 7);
    for name in names {
        assert_eq!(fs::read(d.join("r1").join(&name)).unwrap(), fs::read(d.join("r2").join(&name)).unwrap());
    }
    // the same recipe rewrites the same file
    let again = d.join("t2.json");
    lab(&[
        "expand", "--p", "7", "--alpha", "17/11", "--beta", "-5/13", "--depth", "30", "--out",
        again.to_str().unwrap(),
    ]);
    assert_eq!(fs::read(&trace).unwrap(), fs::read(&again).unwrap());
}

#[test]
fn tampered_trace_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.json");
    let mut args = vec!["expand"];
    args.extend(WORKED);
    args.extend(["--out", trace.to_str().unwrap()]);
    lab(&args);
    let text = fs::read_to_string(&trace).unwrap().replace("\"7/5\"", "\"8/5\"");
    fs::write(&trace, text).unwrap();
    let o = lab(&["verify", "--trace", trace.to_str().unwrap(), "--suite", "rate"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("does not match"));
}

#[test]
fn identities_on_worked_pair() {
    let mut args = vec!["verify", "--suite", "identities"];
    args.extend(WORKED);
    let o = lab(&args);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["summary"]["all_hold"], true);
}

#[test]
fn tight_construction_flags_equality() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.json");
    let o = lab(&["construct", "--tight", "--n", "40", "--out", trace.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = lab(&["verify", "--trace", trace.to_str().unwrap(), "--suite", "rate", "--n-max", "40"]);
    assert_eq!(code(&o), 0);
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    let mins: Vec<&Value> = r["rows"].as_array().unwrap().iter().filter(|x| x["label"] == "min").collect();
    assert_eq!(mins.len(), 41);
    assert!(mins.iter().all(|x| x["tight"] == true));
}

#[test]
fn steps_batch() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(&[
        "verify", "--suite", "steps", "--batch", "100", "--seed", "7", "--out-dir", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json(&dir.path().join("steps.json"));
    assert_eq!(r["params"]["cases"], "100");
    assert_eq!(r["params"]["passing_cases"], "100");
}

#[test]
fn thread_cap_does_not_change_output() {
    let run = |threads: &str| {
        lab_env(
            &["verify", "--suite", "rate", "--batch", "12", "--seed", "3", "--p", "7"],
            &[("MCF_LAB_THREADS", threads)],
        )
    };
    let (one, two) = (run("1"), run("2"));
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, two.stdout);
    assert_eq!(code(&run("0")), 1);
    assert_eq!(code(&run("many")), 1);
}

#[test]
fn construct_ell_plans() {
    let o = lab(&["construct", "--ell", "1,1,1,...", "--n", "30"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = r[0]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 31);
    for row in rows {
        assert_eq!(row["rhs"].as_i64().unwrap(), row["n"].as_i64().unwrap() + 1);
    }
    let o = lab(&["construct", "--ell", "0,1", "--n", "5"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("ℓ positivity"));
}

#[test]
fn construct_degree_one() {
    let o = lab(&["construct", "--D", "1", "--n", "30"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r[0]["bound_name"], "fast_relation");
    assert_eq!(r[0]["rows"].as_array().unwrap().len(), 31);
    let o = lab(&["construct", "--D", "2", "--plan", "degree:1", "--n", "5"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("k-growth condition"));
}

#[test]
fn search_worked_pair() {
    let o = lab(&["search", "--p", "5", "--alpha", "32/5", "--beta", "26/5", "--n", "0"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(r["violations"].as_array().unwrap().is_empty());
    assert_eq!(r["height_cap"], 200);
    // a run of two pairs supports n = 0 only
    let o = lab(&["search", "--p", "5", "--alpha", "32/5", "--beta", "26/5", "--n", "1"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn csv_reports() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["verify", "--suite", "growth", "--format", "csv", "--out-dir", dir.path().to_str().unwrap()];
    args.extend(WORKED);
    let o = lab(&args);
    assert_eq!(code(&o), 0);
    let mut rd = csv::Reader::from_path(dir.path().join("growth.csv")).unwrap();
    assert_eq!(rd.headers().unwrap().len(), 8);
    assert_eq!(rd.records().count(), 3);

    let mut args = vec!["expand", "--format", "csv"];
    args.extend(WORKED);
    let o = lab(&args);
    let mut rd = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(&rd.headers().unwrap()[12], "vVb");
    assert_eq!(rd.records().count(), 2);
}
