//! End-to-end runs of the `cospec` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use cospec::graph::{emit_graph6, Graph};
use serde_json::Value;

const BASE_CACHE: &str = "H@N~vp~\nHiO||}~\nJ(U(. . .) U(. J(. U(. J(. . .)))))\n";
const T_STAR: &str = "J(U(. . .) U(. J(. U(. J(. . .)))))";

fn cospec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cospec")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    assert_eq!(code(o), 0, "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("JSON payload")
}

fn write_cache(dir: &Path) -> String {
    let path = dir.join("base.txt");
    fs::write(&path, BASE_CACHE).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn count_tables() {
    let last = |v: &Value| v["values"].as_array().unwrap().last().unwrap()["value"].as_str().unwrap().to_string();
    let h = json(&cospec(&["count", "--n", "15"]));
    assert_eq!(h["schema"], "cospec/count/v1");
    assert_eq!(last(&h), "699534");
    assert_eq!(last(&json(&cospec(&["count", "--n", "15", "--avoid", "2"]))), "28966");
    assert_eq!(last(&json(&cospec(&["count", "--cographs", "--n", "15"]))), "1399068");
    let csv = cospec(&["count", "--n", "4", "--format", "csv"]);
    assert_eq!(String::from_utf8(csv.stdout).unwrap(), "# cospec/count/v1\nn,value\n1,1\n2,1\n3,2\n4,5\n");
}

#[test]
fn asymptotic_estimates() {
    let v = json(&cospec(&["asym"]));
    assert!(v["rho"].as_str().unwrap().starts_with("0.28083266698420035"));
    assert!(v["C"].as_str().unwrap().starts_with("0.20638144460078"));
    assert_eq!(v["N"], 400);
    assert_eq!(v["precision"], 256);
    let v9 = json(&cospec(&["asym", "--m", "9"]));
    assert_eq!(v9["half_threshold"], 34141);
    assert_eq!(v9["m"], 9);
    assert!(v9["rho"].as_str().unwrap().starts_with("0.2808383687063348"));
    let v15 = json(&cospec(&["asym", "--m", "15"]));
    assert!(v15["ratio"].as_str().unwrap().starts_with("0.99999999004220"));
    assert!(v15["unrestricted"]["rho"].as_str().unwrap().starts_with("0.28083266698420035"));
    assert_eq!(code(&cospec(&["asym", "--format", "csv"])), 3);
    assert_eq!(code(&cospec(&["asym", "--m", "1"])), 3);
}

#[test]
fn discovery_from_a_generated_corpus_then_replay() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("order9.g6");
    let cache = dir.path().join("base.txt");
    let report = dir.path().join("report.json");
    let o = cospec(&["corpus", "--n", "9", "-q", "-o", corpus.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let args = ["discover", "--corpus", corpus.to_str().unwrap(), "--cache", cache.to_str().unwrap()];
    let first = json(&cospec(&[&args[..], &["--report", report.to_str().unwrap(), "-q"]].concat()));
    assert_eq!(first["replayed"], false);
    assert_eq!(first["scanned"], 274668);
    assert_eq!(first["cograph_orbits"].as_array().unwrap().len(), 1);
    assert_eq!(first["base_pair"]["t_star"], T_STAR);
    assert_eq!(fs::read_to_string(&cache).unwrap(), BASE_CACHE);
    let full: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(
        full["report"]["classes"].as_array().unwrap().len(),
        first["collision_classes"].as_u64().unwrap() as usize
    );
    let again = json(&cospec(&args));
    assert_eq!(again["replayed"], true);
    assert_eq!(again["base_pair"], first["base_pair"]);
}

#[test]
fn discovery_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let short = dir.path().join("short.g6");
    fs::write(&short, "H@N~vp~\nHiO||}~\n").unwrap();
    let cache = dir.path().join("cache.txt");
    let o = cospec(&["discover", "--corpus", short.to_str().unwrap(), "--cache", cache.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("274668"));
    assert!(!cache.exists());
    assert_eq!(code(&cospec(&["discover", "--cache", cache.to_str().unwrap()])), 3);
    let bad = dir.path().join("bad.g6");
    fs::write(&bad, "H@N~vp~\n!!\n").unwrap();
    let o = cospec(&["discover", "--corpus", bad.to_str().unwrap(), "--cache", cache.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains(":2:"));
    let replay = json(&cospec(&["discover", "--cache", &write_cache(dir.path())]));
    assert_eq!(replay["replayed"], true);
    assert_eq!(replay["base_pair"]["right"], "HiO||}~");
}

#[test]
fn mates_from_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = write_cache(dir.path());
    let v = json(&cospec(&["mate", "--cotree", T_STAR, "--cache", &cache]));
    assert_eq!(v["mate"], "HiO||}~");
    let host = format!("U(. {T_STAR})");
    let v = json(&cospec(&["mate", "--cotree", &host, "--cache", &cache]));
    assert_eq!(v["order"], 10);
    assert_eq!(v["verification"]["generalized_cospectral"], true);
    assert_eq!(v["verification"]["isomorphic"], false);
    let absent = cospec(&["mate", "--cotree", "U(. .)", "--cache", &cache]);
    assert_eq!(code(&absent), 2);
    assert_eq!(code(&cospec(&["mate", "--cotree", "U(.)", "--cache", &cache])), 3);
    let missing = dir.path().join("none.txt");
    assert_eq!(code(&cospec(&["mate", "--cotree", T_STAR, "--cache", missing.to_str().unwrap()])), 3);
}

#[test]
fn threshold_surveys() {
    let a = json(&cospec(&["survey", "--family", "threshold", "--n", "8", "--kind", "adjacency"]));
    assert_eq!(a["rows"][0]["with_mate"], 0);
    let q = json(&cospec(&["survey", "--family", "threshold", "--n", "6", "--kind", "q"]));
    let row = &q["rows"][0];
    assert!(8 * row["with_mate"].as_u64().unwrap() >= row["total"].as_u64().unwrap());
    assert_eq!(row["all_generalized"], true);
    let csv = cospec(&["survey", "--family", "threshold", "--from", "4", "--n", "6", "--kind", "q", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.starts_with("# cospec/survey/v1\nn,total,with_mate,fraction\n4,8,"));
    assert_eq!(code(&cospec(&["survey", "--family", "threshold", "--n", "13"])), 3);
}

#[test]
fn cograph_and_corpus_surveys() {
    let v = json(&cospec(&["survey", "--family", "cographs", "--n", "9", "-q"]));
    assert_eq!(v["total"], 1532);
    assert_eq!(v["with_mate_in_family"], 0);
    assert_eq!(code(&cospec(&["survey", "--family", "cographs", "--n", "17"])), 3);
    assert_eq!(code(&cospec(&["survey", "--family", "cographs"])), 3);

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("pair.g6");
    let star = Graph::star(3);
    let k3k1 = Graph::complete(3).disjoint_union(&Graph::empty(1));
    fs::write(&file, format!("{}\n{}\n", emit_graph6(&star).unwrap(), emit_graph6(&k3k1).unwrap())).unwrap();
    let path = file.to_str().unwrap();
    let q = json(&cospec(&["survey", "--family", "corpus", "--corpus", path, "--kind", "q"]));
    assert_eq!(q["classes"].as_array().unwrap().len(), 1);
    let a = json(&cospec(&["survey", "--family", "corpus", "--corpus", path]));
    assert!(a["classes"].as_array().unwrap().is_empty());
    assert_eq!(code(&cospec(&["survey", "--family", "corpus", "--corpus", path, "--n", "5"])), 3);
}

#[test]
fn argument_and_environment_errors() {
    assert_eq!(code(&cospec(&["count"])), 3);
    assert_eq!(code(&cospec(&["count", "--n", "0"])), 3);
    assert_eq!(code(&cospec(&["frobnicate"])), 3);
    assert_eq!(code(&cospec(&["--help"])), 0);
    let o = Command::new(env!("CARGO_BIN_EXE_cospec"))
        .args(["count", "--n", "3"])
        .env("COSPEC_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
    let o = Command::new(env!("CARGO_BIN_EXE_cospec"))
        .args(["count", "--n", "3"])
        .env("COSPEC_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
}

#[test]
fn verify_runs_selected_checks() {
    let v = json(&cospec(&["verify", "--only", "1,3,6", "-q"]));
    assert_eq!(v["passed"], true);
    assert_eq!(v["results"].as_array().unwrap().len(), 3);
}

#[test]
fn payloads_are_deterministic() {
    let a = cospec(&["survey", "--family", "cographs", "--n", "8", "--kind", "q", "-q"]);
    let b = cospec(&["survey", "--family", "cographs", "--n", "8", "--kind", "q", "-q"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}
