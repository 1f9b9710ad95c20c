use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn kf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kf")).args(args).env_remove("KF_PRECISION_BITS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn temp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("kf-cli-test-{}-{name}", std::process::id()))
}

#[test]
fn rs_weights_csv() {
    let o = kf(&["code", "rs", "--q", "8", "--a", "4", "--weights"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.starts_with("w,count\n0,1\n"));
    assert!(s.lines().any(|l| l == "4,490"), "{s}");
    let total: u64 = s.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(total, 8u64.pow(5));
}

#[test]
fn simplex_parameters() {
    let path = temp("simplex.code");
    let o = kf(&["code", "simplex", "--s", "2", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).is_empty());
    let info = json(&kf(&["code", "info", path.to_str().unwrap()]));
    assert_eq!((info["n"].as_u64(), info["k"].as_u64(), info["d"].as_u64()), (Some(16), Some(4), Some(8)));
    std::fs::remove_file(path).ok();
}

#[test]
fn verify_chain_levels() {
    let o = kf(&["code", "verify-chain", &data("e8.chain")]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["passed"], Value::Bool(true));
    assert_eq!(r["levels"].as_array().unwrap().len(), 2);
}

#[test]
fn bad_chain_distance_is_a_check_failure() {
    let text = std::fs::read_to_string(data("e8.chain")).unwrap().replace("dist 1 4", "dist 1 5");
    let path = temp("bad.chain");
    std::fs::write(&path, text).unwrap();
    let o = kf(&["code", "verify-chain", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["passed"], Value::Bool(false));
    std::fs::remove_file(path).ok();
}

#[test]
fn construct_e_on_z2_gives_d4() {
    let o = kf(&["lattice", "construct-e", "--base", "Z2", "--chain", &data("pc2.chain")]);
    assert!(o.status.success());
    let r = json(&o);
    assert_eq!(r["dim"], 4);
    assert_eq!(r["enumeration"]["min_norm"], "4");
    assert_eq!(r["enumeration"]["kissing"], 24);
}

#[test]
fn leech_kissing_number() {
    let r = json(&kf(&["lattice", "kiss", &data("leech.gram")]));
    assert_eq!(r["min_norm"], "4");
    assert_eq!(r["kissing"], 196560);
    assert!(r["runtime_ms"].is_u64());
}

#[test]
fn z2_axioms_pass() {
    let o = kf(&["lattice", "verify-t", &data("z2.tlat")]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["passed"], Value::Bool(true));
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["passed"] == Value::Bool(true)));
}

#[test]
fn broken_t_map_fails_the_axioms() {
    let text = std::fs::read_to_string(data("z2.tlat")).unwrap().replace("t 1\n1 -1\n1 1", "t 1\n1 0\n0 1");
    let path = temp("bad.tlat");
    std::fs::write(&path, text).unwrap();
    let o = kf(&["lattice", "verify-t", path.to_str().unwrap()]);
    assert_ne!(o.status.code(), Some(0));
    std::fs::remove_file(path).ok();
}

#[test]
fn elkies_supersingular_points() {
    let o = kf(&["curve", "elkies", "--q", "2", "--k", "3", "--supersingular"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 8);
    assert!(s.lines().all(|l| l.ends_with(",1")));
    let summary = json(&kf(&["curve", "elkies", "--q", "2", "--k", "3", "--summary"]));
    assert_eq!(summary["supersingular"], 8);
}

#[test]
fn delta0_constant() {
    let o = kf(&["bounds", "--const", "theorem15.delta0", "--value"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("0.6506627"), "{}", stdout(&o));
    let r = json(&kf(&["bounds", "--const", "minimax.delta0", "--bits", "256"]));
    assert!(r["value"].as_str().unwrap().starts_with("0.6506627"));
}

#[test]
fn precision_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_kf"))
        .args(["bounds", "--const", "minimax.delta0", "--value"])
        .env("KF_PRECISION_BITS", "8")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_subset_scorecard() {
    let o = kf(&["verify", "--suite", "fast", "--only", "7,10", "--no-timing"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["suite"], "fast");
    assert_eq!(r["passed"], Value::Bool(true));
    assert_eq!(r["checks"].as_array().unwrap().len(), 2);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(kf(&["bogus"]).status.code(), Some(2));
    assert_eq!(kf(&["code", "rs", "--q", "8"]).status.code(), Some(2));
    assert_eq!(kf(&["verify", "--suite", "medium"]).status.code(), Some(2));
    assert_eq!(kf(&["lattice", "kiss", "/nonexistent/file.gram"]).status.code(), Some(2));
    assert_eq!(kf(&["code", "rs", "--q", "6", "--a", "2"]).status.code(), Some(2));
}

#[test]
fn reruns_are_byte_identical_with_matching_manifests() {
    let args = ["lattice", "construct-d", "--chain", &data("e8.chain"), "--no-timing"];
    let (m1, m2) = (temp("m1.json"), temp("m2.json"));
    let a = kf(&[&args[..], &["--manifest", m1.to_str().unwrap()]].concat());
    let b = kf(&[&args[..], &["--manifest", m2.to_str().unwrap()]].concat());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["enumeration"]["kissing"], 240);
    let read = |p: &PathBuf| -> Value { serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap() };
    let (ma, mb) = (read(&m1), read(&m2));
    assert_eq!(ma["command"], "lattice construct-d");
    assert_eq!(ma["inputs"], mb["inputs"]);
    assert_eq!(ma["output_sha256"], mb["output_sha256"]);
    assert_eq!(ma["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert_eq!(ma["wall_clock_ms"], 0);
    std::fs::remove_file(m1).ok();
    std::fs::remove_file(m2).ok();
}

#[test]
fn tlat_round_trip_through_export() {
    let o = kf(&["lattice", "export", "Z2", "--t"]);
    assert_eq!(stdout(&o), std::fs::read_to_string(data("z2.tlat")).unwrap());
}
