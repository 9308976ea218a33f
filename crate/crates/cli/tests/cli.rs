use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hcolour"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn validate(command: &str, v: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{command}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{command}: {errors:?}\n{v:#}");
}

struct Dir(tempfile::TempDir);

impl Dir {
    fn new() -> Dir {
        Dir(tempfile::tempdir().unwrap())
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let p = self.0.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn generated(&self, spec: &str, seed: u64) -> PathBuf {
        let p = self.0.path().join(format!("{}-{seed}.txt", spec.replace([':', ','], "_")));
        let out = run(&["gen", spec, "--seed", &seed.to_string(), "--out", p.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        p
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn ipoly_on_c5() {
    let d = Dir::new();
    let c5 = d.generated("cycle:5", 0);
    let out = run(&["ipoly", s(&c5)]);
    assert!(out.status.success());
    let v = json(&out);
    validate("ipoly", &v);
    assert_eq!(v["result"]["coefficients"], serde_json::json!([1, 5, 5]));
    assert_eq!(v["result"]["z"], 11.0);
    assert_eq!(v["params"]["lambda"], 1.0);
    assert_eq!(v["seed"], 0);
    assert!(v["inputs"]["graph"].as_str().unwrap().starts_with("sha256:"));
}

#[test]
fn ipoly_rejects_empty_graph() {
    let d = Dir::new();
    let out = run(&["ipoly", s(&d.file("empty.txt", ""))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty graph"));
}

#[test]
fn parse_and_usage_errors_exit_1() {
    let d = Dir::new();
    assert_eq!(run(&["ipoly", s(&d.file("bad.txt", "0 x\n"))]).status.code(), Some(1));
    assert_eq!(run(&["ipoly", "/nonexistent/graph.txt"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["bounds", "--setting", "ck-free:x", "--max-degree", "5"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn occupancy_verifies_c5_and_rejects_k4() {
    let d = Dir::new();
    let out = run(&["occupancy", s(&d.generated("cycle:5", 0)), "--setting", "triangle-free"]);
    assert!(out.status.success());
    let v = json(&out);
    validate("occupancy", &v);
    assert_eq!(v["result"]["report"]["verified"], true);
    assert!(v["result"]["report"]["minGap"].as_f64().unwrap() >= 0.0);

    let out = run(&["occupancy", s(&d.generated("complete:4", 0)), "--setting", "triangle-free"]);
    let v = json(&out);
    validate("occupancy", &v);
    assert_eq!(v["result"]["report"]["verified"], false);
    let w = &v["result"]["report"]["witness"];
    assert_eq!(w["subgraphVertices"].as_array().unwrap().len(), 3);
    assert_eq!(w["subgraphEdges"].as_array().unwrap().len(), 3);
}

#[test]
fn occupancy_search_and_explicit_parameters() {
    let d = Dir::new();
    let pet = d.generated("petersen", 0);
    let v = json(&run(&["occupancy", s(&pet), "--search", "--lambda", "0.5"]));
    validate("occupancy", &v);
    assert_eq!(v["result"]["report"]["verified"], true);
    let v = json(&run(&["occupancy", s(&pet), "--beta", "3", "--gamma", "1"]));
    validate("occupancy", &v);
    assert_eq!(v["result"]["parameters"]["budget"], 6.0);
}

#[test]
fn strong_mode_over_cap_is_a_cap_error() {
    let d = Dir::new();
    let out = run(&["occupancy", s(&d.generated("complete:6", 0)), "--setting", "triangle-free", "--strong", "--cap", "3"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bounds_evaluations() {
    let v = json(&run(&["bounds", "--setting", "triangle-free", "--max-degree", "1", "--lambda", "2"]));
    validate("bounds", &v);
    assert_eq!(v["result"]["formula"], "occupancy/triangle-free");
    let v = json(&run(&["bounds", "--setting", "clique:4", "--max-degree", "1000", "--lambda", "0.5"]));
    validate("bounds", &v);
    assert!(v["result"]["substitution"].is_string());
    let v = json(&run(&["bounds", "--setting", "hall-ratio:1.5", "--max-degree", "100", "--mode", "fractional", "--delta0", "10"]));
    validate("bounds", &v);
    assert_eq!(v["result"]["formula"], "fractional/hall-ratio");
    assert!(v["result"]["value"].as_f64().unwrap() > 0.0);
}

#[test]
fn bounds_regime_error_exits_3() {
    let out = run(&["bounds", "--setting", "triangle-free", "--max-degree", "1", "--mode", "list"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn colour_success_is_verified_and_deterministic() {
    let d = Dir::new();
    let g = d.generated("triangle-free:30,6", 2);
    let args = ["colour", s(&g), "--random-cover", "30", "--keep", "0.2", "--ell", "12", "--lambda", "0.2", "--seed", "9"];
    let a = run(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let v = json(&a);
    validate("colour", &v);
    assert_eq!(v["result"]["verified"], true);
    assert_eq!(v["seed"], 9);
    assert_eq!(a.stdout, run(&args).stdout);
}

#[test]
fn colour_failure_is_reported_with_exit_2() {
    let d = Dir::new();
    let g = d.file("k2.txt", "0 1\n");
    let lists = d.file("lists.txt", "0: 7\n1: 7\n");
    let out = run(&["colour", s(&g), "--lists", s(&lists), "--ell", "1", "--rounds", "20"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    validate("colour", &v);
    assert_eq!(v["failure"]["phase"], "partial");
    assert!(v.get("result").is_none());
    assert!(v["inputs"]["lists"].is_string());
}

#[test]
fn colour_with_lists_reports_list_colours() {
    let d = Dir::new();
    let g = d.file("p3.txt", "0 1\n1 2\n");
    let lists = d.file("lists.txt", "0: 1 2 3 4 5 6 7 8\n1: 11 12 13 14 15 16 17 18\n2: 21 22 23 24 25 26 27 28\n");
    let v = json(&run(&["colour", s(&g), "--lists", s(&lists), "--ell", "3"]));
    validate("colour", &v);
    let colours: Vec<u64> = v["result"]["colours"].as_array().unwrap().iter().map(|c| c.as_u64().unwrap()).collect();
    assert!((1..=8).contains(&colours[0]) && (11..=18).contains(&colours[1]) && (21..=28).contains(&colours[2]));
}

#[test]
fn colour_sweep_is_independent_of_jobs() {
    let d = Dir::new();
    let g = d.generated("triangle-free:20,4", 1);
    let base = ["colour", s(&g), "--random-cover", "30", "--keep", "0.2", "--ell", "12", "--lambda", "0.2", "--runs", "6"];
    let one = run(&[&base[..], &["--jobs", "1"]].concat());
    let four = run(&[&base[..], &["--jobs", "4"]].concat());
    assert_eq!(one.stdout, four.stdout);
    let v = json(&one);
    validate("colour", &v);
    assert_eq!(v["result"]["runs"].as_array().unwrap().len(), 6);
}

#[test]
fn gen_kneser_regular_and_seeds() {
    let d = Dir::new();
    let k = std::fs::read_to_string(d.generated("kneser:5,2", 0)).unwrap();
    assert!(k.lines().any(|l| l == "p 10 15"));
    let r = std::fs::read_to_string(d.generated("random-regular:20,3", 4)).unwrap();
    let mut deg = [0usize; 20];
    for l in r.lines().filter(|l| l.starts_with("e ")) {
        let t: Vec<usize> = l[2..].split(' ').map(|x| x.parse().unwrap()).collect();
        deg[t[0]] += 1;
        deg[t[1]] += 1;
    }
    assert!(deg.iter().all(|&x| x == 3));
    let again = run(&["gen", "random-regular:20,3", "--seed", "4"]);
    assert_eq!(String::from_utf8(again.stdout).unwrap(), r);
    let other = run(&["gen", "random-regular:20,3", "--seed", "5"]);
    assert_ne!(String::from_utf8(other.stdout).unwrap(), r);
}

#[test]
fn split_outputs_sequences() {
    let d = Dir::new();
    let g = d.generated("random-regular:50,3", 0);
    let v = json(&run(&["split", s(&g), "--f", "1.01", "--seed", "3"]));
    validate("split", &v);
    let j = v["result"]["j"].as_u64().unwrap();
    assert!(j >= 1);
    assert_eq!(v["result"]["degreeSequence"][1], 1.5 + 2.0 * (3.0 * 3f64.ln()).sqrt());
    assert!(v["result"]["parts"].as_array().unwrap().len() <= 1 << j);
    let e = run(&["split", s(&g), "--f", "2", "--delta", "0.5"]);
    assert_eq!(e.status.code(), Some(1));
}

#[test]
fn tsv_has_one_row_per_leaf() {
    let d = Dir::new();
    let out = run(&["ipoly", s(&d.generated("path:3", 0)), "--format", "tsv", "--seed", "4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "seed\t4"));
    assert!(text.lines().any(|l| l == "result.coefficients\t[1,3,1]"));
}
