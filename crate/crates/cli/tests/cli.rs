use std::collections::HashMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use num_complex::Complex64;
use qcluster::conics::residual;
use qcluster::seedio::SeedDoc;
use serde_json::Value;

fn seed(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", "seeds", name]
        .iter()
        .collect();
    p.to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcluster"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).expect("stderr is one JSON object")
}

fn ok_json(args: &[&str]) -> Value {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn temp_seed(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn empty_sequence_echoes_canonically() {
    let k = seed("kronecker.json");
    let o = run(&["mutate", "--seed", &k]);
    assert!(o.status.success());
    let text = stdout(&o);
    let original = SeedDoc::parse(&std::fs::read_to_string(&k).unwrap()).unwrap();
    assert_eq!(SeedDoc::parse(&text).unwrap(), original);
    let f = temp_seed(&text);
    let again = run(&["mutate", "--seed", f.path().to_str().unwrap()]);
    assert_eq!(stdout(&again), text);
}

#[test]
fn single_mutation_and_round_trip() {
    let k = seed("kronecker.json");
    let v = ok_json(&["mutate", "--seed", &k, "1"]);
    assert_eq!(v["vars"][0], "x1^-1*x2^2 + x1^-1");
    assert_eq!(v["vars"][1], "x2");
    assert_eq!(v["history"], serde_json::json!([1]));

    let o = run(&["mutate", "--seed", &k, "1", "1"]);
    let back = SeedDoc::parse(&stdout(&o)).unwrap();
    let start = SeedDoc::parse(&std::fs::read_to_string(&k).unwrap()).unwrap();
    assert_eq!(back.classical_seed().unwrap(), start.classical_seed().unwrap());
    assert_eq!(back.current().unwrap(), start.current().unwrap());

    let out = stdout(&run(&["mutate", "--seed", &k, "1,2", "1"]));
    let f = temp_seed(&out);
    let reparsed = run(&["mutate", "--seed", f.path().to_str().unwrap()]);
    assert_eq!(stdout(&reparsed), out);
}

#[test]
fn quantum_mutation_keeps_ell() {
    let v = ok_json(&["mutate", "--seed", &seed("kronecker-strict.json"), "2"]);
    assert_eq!(v["ell"], 5);
    assert!(v["vars"][1].as_str().unwrap().contains("x2^-1"));
}

#[test]
fn explore_shapes() {
    let k = seed("kronecker.json");
    let g = ok_json(&["explore", "--seed", &k, "--depth", "0"]);
    assert_eq!(g["nodes"].as_array().unwrap().len(), 1);
    assert_eq!(g["truncated"], true);

    let g = ok_json(&["explore", "--seed", &k, "--depth", "3"]);
    let nodes = g["nodes"].as_array().unwrap();
    let edges = g["edges"].as_array().unwrap();
    assert_eq!(nodes.len(), 7);
    assert_eq!(edges.len(), 6);
    let mut degree: HashMap<u64, usize> = HashMap::new();
    for e in edges {
        *degree.entry(e[0].as_u64().unwrap()).or_default() += 1;
        *degree.entry(e[1].as_u64().unwrap()).or_default() += 1;
    }
    assert!(degree.values().all(|&d| d <= 2));
    assert_eq!(degree.values().filter(|&&d| d == 1).count(), 2);

    let g = ok_json(&["explore", "--seed", &seed("a2.json"), "--depth", "12"]);
    assert_eq!(g["truncated"], false);
    // labelled seeds of type A2 form a 10-cycle
    assert_eq!(g["nodes"].as_array().unwrap().len(), 10);
    assert_eq!(g["edges"].as_array().unwrap().len(), 10);

    let dot = stdout(&run(&["explore", "--seed", &k, "--depth", "1", "--format", "dot"]));
    assert!(dot.starts_with("graph exchange {"));
    assert!(dot.contains("[label=\"2\"]"));
}

#[test]
fn output_is_deterministic() {
    let args = ["explore", "--seed", &seed("kronecker-strict.json"), "--depth", "2"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["conics", "--z", "-2.5,0.5", "--samples", "7"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn analyses() {
    let k = seed("kronecker.json");
    let v = ok_json(&["analyze", "--seed", &k, "pi-degree", "--ell", "5"]);
    assert_eq!(v["pi_degree"], 5);
    assert_eq!(ok_json(&["analyze", "--seed", &k, "weights"]), serde_json::json!([]));
    let v = ok_json(&["analyze", "--seed", &k, "bracket"]);
    assert_eq!(v["brackets"][0]["value"], "x1*x2");
    let v = ok_json(&["analyze", "--seed", &k, "anticanonical"]);
    assert_ne!(v["coefficient"], "0");
    let v = ok_json(&["analyze", "--seed", &k, "presentation"]);
    assert_eq!(v["classical"][0], serde_json::json!(["x1*x1'", "x2^2 + 1"]));
    assert!(v.get("quantum").is_none());

    let o = run(&["analyze", "--seed", &k, "compat"]);
    assert_eq!(o.status.code(), Some(3));
    let e = stderr_json(&o);
    assert_eq!(e["code"], "not-compatible");
    assert!(e["message"].as_str().unwrap().contains("-Lambda"));

    let v = ok_json(&["analyze", "--seed", &seed("kronecker-strict.json"), "compat"]);
    assert_eq!(v["D_mod_ell"], serde_json::json!([2, 2]));

    let v = ok_json(&["analyze", "--seed", &seed("frozen-3x1.json"), "azumaya-report"]);
    assert_eq!(v["nc"], serde_json::json!([3]));
    assert_eq!(v["strata"][1]["relation"], "<");
    let v = ok_json(&["analyze", "--seed", &seed("frozen-3x1.json"), "nc"]);
    assert_eq!(v["nc"], serde_json::json!([3]));

    let o = run(&["analyze", "--seed", &k, "pi-degree"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["code"], "usage");
}

#[test]
fn conics_csv() {
    let o = run(&["conics", "--z", "-3,0,1.5,3", "--samples", "40"]);
    assert!(o.status.success());
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(
        r.headers().unwrap().iter().collect::<Vec<_>>(),
        ["z", "branch", "t", "re_x1", "im_x1", "re_x2", "im_x2"]
    );
    let mut branches: HashMap<String, Vec<String>> = HashMap::new();
    let mut base: HashMap<String, usize> = HashMap::new();
    for rec in r.records() {
        let rec = rec.unwrap();
        let f = |i: usize| rec[i].parse::<f64>().unwrap();
        let (x1, x2) = (Complex64::new(f(3), f(4)), Complex64::new(f(5), f(6)));
        assert!(residual(f(0), x1, x2).norm() < 1e-9, "{rec:?}");
        let z = rec[0].to_string();
        if &rec[1] == "base" {
            *base.entry(z).or_default() += 1;
        } else {
            let b = branches.entry(z).or_default();
            if !b.iter().any(|n| n == &rec[1]) {
                b.push(rec[1].to_string());
            }
        }
    }
    assert_eq!(base.len(), 4);
    assert!(base.values().all(|&n| n == 4));
    assert_eq!(branches["3.00000000000e0"].len(), 4);
    assert_eq!(branches["0.00000000000e0"].len(), 1);

    let o = run(&["conics", "--samples", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_runs_and_fails_on_corruption() {
    let o = run(&["verify"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);

    let v = ok_json(&["verify", "--only", "z-identities"]);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 4);
    assert!(checks
        .iter()
        .all(|c| c["name"].as_str().unwrap().starts_with("z-identities/")));

    let o = run(&["verify", "--lambda", "0,2;-2,0", "--ell", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let e = stderr_json(&o);
    assert_eq!(e["code"], "verification-failed");
    let failed: Vec<&str> = e["failed"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert!(failed.contains(&"quantum-l3/relations"));

    assert!(run(&["verify", "--only", "recursion/x3"]).status.success());
}

#[test]
fn error_objects_and_exit_codes() {
    let o = run(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["code"], "usage");

    let bad = temp_seed("{\"n\": 2, \"ex\": [1, 2]}");
    let o = run(&["mutate", "--seed", bad.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr_json(&o)["code"], "parse-error");

    let o = run(&["mutate", "--seed", &seed("acyclic-3x2.json"), "3"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr_json(&o)["code"], "not-mutable");

    let o = run(&["mutate", "--seed", &seed("kronecker.json"), "0"]);
    assert_eq!(o.status.code(), Some(2));
}
