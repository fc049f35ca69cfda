use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> (i32, Value, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_triadeform"));
    cmd.args(args).env_remove("TRIADEFORM_SEED");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let json = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), json, String::from_utf8(out.stderr).unwrap())
}

fn run(args: &[&str]) -> (i32, Value) {
    let (code, json, _) = run_env(args, &[]);
    (code, json)
}

#[test]
fn ring_units() {
    let (code, v) = run(&["ring", "units", "Z[sqrt(2)]"]);
    assert_eq!(code, 0);
    assert_eq!(v["torsion_order"], 2);
    assert_eq!(v["fundamental_units"], serde_json::json!(["1+1*sqrt(2)"]));
    assert_eq!(v["lemma"], "unit-group");
    let (_, v) = run(&["ring", "units", "Z/7"]);
    assert_eq!(v["torsion"][0]["generator"], "3");
    assert_eq!(v["torsion_order"], 6);
}

#[test]
fn ring_predicates_set_exit_codes() {
    let (code, v) = run(&["ring", "divides", "Z[sqrt(2)]", "1+1*sqrt(2)", "7"]);
    assert_eq!((code, v["divides"].as_bool()), (0, Some(true)));
    let (code, v) = run(&["ring", "divides", "Z", "3", "7"]);
    assert_eq!((code, v["divides"].as_bool()), (1, Some(false)));
    let (code, v) = run(&["ring", "info", "Z/12"]);
    assert_eq!(code, 0);
    assert_eq!(v["integral_domain"], false);
    assert_eq!(v["cardinality"], "12");

    let psi = |delta: &str| {
        run(&[
            "ring", "psi", "Z[sqrt(2)]", "--s", "1", "--lambda", "3+2*sqrt(2)", "--alpha", "3+2*sqrt(2)", "--beta",
            "3+2*sqrt(2)", "--delta", delta, "--a", "0",
        ])
    };
    let (code, v) = psi("17+12*sqrt(2)");
    assert_eq!((code, v["value"].as_bool()), (0, Some(true)));
    let (code, v) = psi("3+2*sqrt(2)");
    assert_eq!((code, v["value"].as_bool()), (1, Some(false)));
}

#[test]
fn ext() {
    let (code, v) = run(&["ext", "Z/4", "Z/6"]);
    assert_eq!(code, 0);
    assert_eq!((v["ext"].as_str(), v["order"].as_str()), (Some("Z/2"), Some("2")));
    let (_, v) = run(&["ext", "Z", "Z/6"]);
    assert_eq!(v["order"], "1");
}

#[test]
fn cocycles() {
    let (code, v) = run(&["cocycle", "is-coboundary", "--file", &fixture("trivial.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["coboundary"], true);
    assert_eq!(v["witness"], "1");

    let carry = fixture("carry_z3.json");
    let (code, v) = run(&["cocycle", "is-coboundary", "--file", &carry]);
    assert_eq!((code, v["coboundary"].as_bool()), (1, Some(false)));
    let (code, v) = run(&["cocycle", "verify", "--file", &carry]);
    assert_eq!((code, v["triples_checked"].as_u64()), (0, Some(27)));
    let (code, _) = run(&["cocycle", "is-cot", "--file", &carry]);
    assert_eq!(code, 1);

    let (code, v) = run(&["cocycle", "transport", "--file", &carry, "--psi", "[[2]]", "--eta", "[[2]]"]);
    assert_eq!(code, 0);
    assert_eq!(v["coboundary_after"], false);
    let (code, _, err) = run_env(&["cocycle", "transport", "--file", &carry, "--psi", "[[0]]", "--eta", "[[1]]"], &[]);
    assert_eq!(code, 2);
    assert!(err.contains("bijective"));
}

#[test]
fn groups() {
    let t3 = fixture("t3_z3.json");
    let (code, v) = run(&["group", "check-presentation", "--spec", &t3]);
    assert_eq!(code, 0);
    assert_eq!(v["exhaustive"], true);
    assert_eq!(v["families"].as_array().unwrap().len(), 5);

    let (code, v) = run(&["group", "enumerate", "--spec", &fixture("t2_z3.json"), "--list"]);
    assert_eq!((code, v["order"].as_u64()), (0, Some(12)));
    assert_eq!(v["elements"].as_array().unwrap().len(), 12);

    let (code, v) = run(&["group", "fn-identity", "--spec", &fixture("t3_z5.json")]);
    assert_eq!((code, v["pairs_checked"].as_u64()), (0, Some(16)));

    let (code, v) = run(&["group", "split-iso", "--spec", &fixture("t3_q.json"), "--trials", "40"]);
    assert_eq!((code, v["split"].as_bool()), (0, Some(true)));

    let (code, v) = run(&["group", "mul", "--spec", &fixture("t3_q.json"), r#"{"upper": {"1,2": "1/2"}}"#, r#"{"upper": {"1,2": "1/2"}}"#]);
    assert_eq!(code, 0);
    assert_eq!(v["text"], "(x=[1, 1], z=1, U={1,2: 1})");

    let (code, v) = run(&["group", "build", "--spec", &t3]);
    assert_eq!((code, v["order"].as_u64()), (0, Some(216)));
}

#[test]
fn twisted_spec_has_no_splitting() {
    let (code, v) = run(&["group", "split-iso", "--spec", &fixture("t3_z3_twisted.json")]);
    assert_eq!(code, 1);
    assert_eq!(v["missing_witness"], 1);
    let (code, v) = run(&["structure", "theta", "--group", &fixture("t3_z3_twisted.json"), "--index", "1"]);
    assert_eq!((code, v["holds"].as_bool()), (1, Some(false)));
    let (code, _) = run(&["group", "check-presentation", "--spec", &fixture("t3_z3_twisted.json")]);
    assert_eq!(code, 0);
}

#[test]
fn structure() {
    let t3 = fixture("t3_z3.json");
    let (code, v) = run(&["structure", "fitting", "--group", &t3, "--brute-force"]);
    assert_eq!(code, 0);
    assert_eq!(v["order"], 54);
    assert_eq!(v["agrees_with_description"], true);
    assert_eq!(v["lemma"], "Fitt-desc");

    for (cmd, order) in [("center", 2), ("derived", 27)] {
        let (code, v) = run(&["structure", cmd, "--group", &t3, "--brute-force"]);
        assert_eq!(code, 0, "{cmd}");
        assert_eq!(v["order"], order, "{cmd}");
        assert_eq!(v["agrees_with_description"], true, "{cmd}");
    }
    let (code, v) = run(&["structure", "torus", "--group", &t3, "--index", "2", "--brute-force"]);
    assert_eq!((code, v["order"].as_u64()), (0, Some(4)));
    let (code, v) = run(&["structure", "width", "--group", &t3, "--bound", "3"]);
    assert_eq!((code, v["width"].as_u64()), (0, Some(1)));

    let q = fixture("t3_q.json");
    let (code, v) = run(&["structure", "derived", "--group", &q]);
    assert_eq!(code, 0);
    assert!(v["order"].is_null());
    let (code, _, err) = run_env(&["structure", "derived", "--group", &q, "--brute-force"], &[]);
    assert_eq!(code, 2);
    assert!(err.contains("finite"));
    let (_, v) = run(&["structure", "torus", "--group", &q, "--index", "1", "--element", r#"{"xbar": ["5", "1"], "z": "3"}"#]);
    assert_eq!(v["alpha"], "5");
}

#[test]
fn formulas() {
    let (code, v) = run(&["fo", "parse", "A y.[x,y]=1"]);
    assert_eq!(code, 0);
    assert_eq!(v["formula"], "A y. [x, y] = 1");
    assert_eq!(v["free_vars"], serde_json::json!(["x"]));
    let (code, _, err) = run_env(&["fo", "parse", "A y x = 1"], &[]);
    assert_eq!(code, 2);
    assert!(err.contains("byte 4"));

    let t2 = fixture("t2_z3.json");
    let (code, v) = run(&["fo", "eval", "--model", &t2, "--formula", "A y. [x, y] = 1"]);
    assert_eq!(code, 0);
    assert_eq!(v["order"], 2);
    let (code, v) = run(&["fo", "eval", "--model", &t2, "--formula", "E x. E y. !([x, y] = 1)", "--semantic"]);
    assert_eq!((code, v["value"].as_bool()), (0, Some(true)));
    let (code, _) = run(&["fo", "eval", "--model", &t2, "--formula", "A x. A y. [x, y] = 1"]);
    assert_eq!(code, 1);

    let t3 = fixture("t3_z3.json");
    let phi = "A x1. A x2. A x3. [x^x1, x^x2, x^x3] = 1";
    let (_, v) = run(&["fo", "eval", "--model", &t3, "--formula", phi, "--semantic"]);
    assert_eq!(v["order"], 54);
    let (code, v) = run(&["fo", "eval", "--model", &t3, "--formula", "@H(x) -> @Fitt(x)", "--define", "H=derived", "--define", "Fitt=fitting", "--assign", r#"x={"upper": {"1,3": "1"}}"#]);
    assert_eq!((code, v["value"].as_bool()), (0, Some(true)));
    let (code, v) = run(&["fo", "eval", "--model", &t3, "--formula", "[x, $d] = 1", "--const", r#"d={"xbar": ["2", "2"]}"#]);
    assert_eq!(code, 0);
    assert!(v["order"].as_u64().unwrap() > 2);
    let (code, _, err) = run_env(&["fo", "eval", "--model", &t3, "--formula", "@H(x)"], &[]);
    assert_eq!(code, 2);
    assert!(err.contains("unregistered"));
    let (code, _, err) = run_env(&["fo", "eval", "--model", &t3, "--formula", "E x. A y. E z. [x, y] = z", "--budget", "10"], &[]);
    assert_eq!(code, 2);
    assert!(err.contains("budget"));
}

#[test]
fn seeds() {
    let args = ["group", "check-presentation", "--spec", &fixture("t3_q.json"), "--trials", "20"];
    let (_, a, _) = run_env(&args, &[("TRIADEFORM_SEED", "11")]);
    let (_, b, _) = run_env(&args, &[("TRIADEFORM_SEED", "11")]);
    assert_eq!(a, b);
    assert_eq!(a["seed"], 11);
    let mut explicit = args.to_vec();
    explicit.extend(["--seed", "3"]);
    let (_, c, _) = run_env(&explicit, &[("TRIADEFORM_SEED", "11")]);
    assert_eq!(c["seed"], 3);
    let (_, d, _) = run_env(&args, &[]);
    assert_eq!(d["seed"], 0);
}

#[test]
fn usage_errors_exit_two() {
    for args in [&["bogus"][..], &["ring", "units"], &["ring", "units", "Z/1"], &["group", "build", "--spec", "/nonexistent.json"]] {
        let (code, _, _) = run_env(args, &[]);
        assert_eq!(code, 2, "{args:?}");
    }
}

#[test]
fn text_output() {
    let out = Command::new(env!("CARGO_BIN_EXE_triadeform"))
        .args(["--output", "text", "ext", "Z/4", "Z/6"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "ext: Z/2"));
    assert!(text.lines().any(|l| l == "lemma: Ext"));
}
