use std::io::Write;
use std::process::{Command, Stdio};

use contraction_cli::{run, run_with_stdin, tempered_sample};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_contraction"))
}

fn json(args: &[&str]) -> Value {
    let mut argv = vec!["contraction", "--format", "json"];
    argv.extend_from_slice(args);
    let out = run(argv);
    assert_eq!(out.code, 0, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn exit_codes() {
    let ok = run(["contraction", "contract", "--family", "discrete", "--n", "0", "--sign", "+"]);
    assert_eq!(ok.code, 0, "{}", ok.stderr);
    assert!(ok.stderr.is_empty());

    let usage = run(["contraction", "verify", "--bogus"]);
    assert_eq!(usage.code, 2);
    assert!(usage.stdout.is_empty());

    let no_family = run(["contraction", "verify"]);
    assert_eq!(no_family.code, 2);

    let bad_l = run(["contraction", "family", "--family", "principal", "--l", "0"]);
    assert_eq!(bad_l.code, 2);

    let help = run(["contraction", "--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("verify"));

    // A hand-written family with the wrong sign on F breaks [E, F] = t²H.
    let broken = "family custom range=all k=0 l=2i\n\
                  E(p) = (1/2 - p)*t - l/2\n\
                  F(p) = -(p + 1/2)*t - l/2\n\
                  H(p) = -2*p\n";
    let out = run_with_stdin(["contraction", "verify", "--doc", "-", "--window", "3"], Some(broken));
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("FAIL custom: brackets"), "{}", out.stdout);
    assert!(out.stderr.contains("failed invariant: custom: brackets"));

    let bad_doc = run_with_stdin(["contraction", "verify", "--doc", "-"], Some("family custom range=all k=0\nE(p) = 1/(p)\nF(p) = 0\nH(p) = -2*p\n"));
    assert_eq!(bad_doc.code, 2);
    assert!(bad_doc.stderr.contains(":2:10: semantic error"), "{}", bad_doc.stderr);
}

#[test]
fn documented_examples() {
    let v = json(&["contract", "--family", "discrete", "--n", "0", "--sign", "+"]);
    let text = v.to_string();
    assert!(text.contains("E_axis"), "{text}");
    assert!(text.contains("C_1"), "{text}");

    let v = json(&["verify", "--family", "principal", "--l", "2i", "--k", "0", "--window", "25"]);
    let inv = v["invariants"].as_array().unwrap();
    assert!(inv.iter().all(|i| i["passed"] == true));
    for name in ["brackets", "casimir", "weight_step", "equivariance", "composition"] {
        assert!(inv.iter().any(|i| i["name"].as_str().unwrap().contains(name)), "{name}");
    }

    let v = json(&["intertwine", "--l", "3", "--k", "0", "--window", "6"]);
    let inv = v["invariants"].as_array().unwrap();
    assert!(inv.iter().any(|i| i["name"] == "finite_rank" && i["passed"] == true), "{v}");

    let v = json(&["schmid"]);
    assert!(v["invariants"].as_array().unwrap().iter().all(|i| i["passed"] == true));
    assert_eq!(v["engine_version"], contraction_core::ENGINE_VERSION);
}

#[test]
fn numbers_are_strings() {
    fn walk(v: &Value) {
        match v {
            Value::Number(n) => panic!("bare number {n}"),
            Value::Array(a) => a.iter().for_each(walk),
            Value::Object(o) => o.values().for_each(walk),
            _ => {}
        }
    }
    walk(&json(&["family", "--family", "principal", "--l", "1+i", "--k", "1", "--window", "4"]));
    walk(&json(&["intertwine", "--l", "2i", "--k", "1", "--window", "4", "--t", "1/2"]));
    walk(&json(&["verify", "--family", "rees_lambda0", "--k", "0,1", "--window", "4"]));
    walk(&json(&["contract", "--family", "minimal_ktype", "--l", "3/2i", "--k", "1", "--window", "4"]));
    walk(&json(&["bijection", "--preset", "tempered-sample"]));
    walk(&json(&["schmid", "--window", "5"]));
}

#[test]
fn bijection_specs_extend_the_preset() {
    let v = json(&["bijection", "--preset", "tempered-sample", "--spec", "discrete n=4 sign=-"]);
    let rows = v["result"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), tempered_sample().len() + 1);
    assert!(rows.iter().any(|r| r["group_label"] == "D-_4" && r["datum"] == "C_-5"));

    // P(2i) and P(-2i) are the same group representation: no collision.
    let v = json(&["bijection", "--spec", "principal l=2i k=0", "--spec", "principal l=-2i k=0"]);
    assert_eq!(v["result"]["collisions"], Value::Array(vec![]));

    let bad = run(["contraction", "bijection", "--spec", "principal l=2i k=7"]);
    assert_eq!(bad.code, 2);
}

#[test]
fn reports_are_deterministic() {
    let args = ["--format", "json", "verify", "--family", "principal", "--l", "3,2i,1+i", "--k", "0,1", "--window", "12"];
    let mut outs = Vec::new();
    for jobs in ["1", "2", "5"] {
        let out = bin().args(args).env("CONTRACTION_JOBS", jobs).output().unwrap();
        assert!(out.status.success());
        outs.push(out.stdout);
    }
    let again = bin().args(args).output().unwrap();
    outs.push(again.stdout);
    assert!(outs.windows(2).all(|w| w[0] == w[1]));

    let with_flag = run(["contraction", "--format", "json", "verify", "--family", "principal", "--l", "3,2i,1+i", "--k", "0,1", "--window", "12", "--jobs", "3"]);
    assert_eq!(with_flag.stdout.as_bytes(), outs[0].as_slice());

    let text1 = run(["contraction", "bijection", "--preset", "tempered-sample"]).stdout;
    let text2 = run(["contraction", "bijection", "--preset", "tempered-sample"]).stdout;
    assert_eq!(text1, text2);
}

#[test]
fn bad_jobs_env_is_a_usage_error() {
    let out = bin()
        .args(["verify", "--family", "discrete", "--n", "1", "--sign", "-"])
        .env("CONTRACTION_JOBS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn doc_from_stdin_and_file() {
    let doc = "family custom range=0.. k=0\nE(p) = 1\nF(p) = -t^2*p*(1 + p)\nH(p) = 2*p + 2\n";
    let mut child = bin()
        .args(["--format", "json", "contract", "--doc", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(doc.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.to_string().contains("E_axis"), "{v}");

    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/corpus/valid/custom_principal.mod");
    let v = json(&["verify", "--doc", path, "--window", "10"]);
    assert!(v["invariants"].as_array().unwrap().iter().all(|i| i["passed"] == true));

    let missing = run(["contraction", "verify", "--doc", "/nonexistent/file.mod"]);
    assert_eq!(missing.code, 2);
}
