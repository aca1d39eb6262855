use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const CANTOR: &str = r#"{"cantor":{"t":0,"s":1}}"#;
const ONE_ON_UNIT: &str = r#"{"terms":[{"set":{"interval":[0,1]},"expr":{"const":1}}]}"#;

fn hdint(args: &[&str]) -> Output {
    hdint_stdin(args, None)
}

fn hdint_stdin(args: &[&str], input: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hdint"))
        .args(args)
        // keep a user's config out of the tests
        .env("HDINT_CONFIG", "/nonexistent/hdint.toml")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    {
        let mut stdin = child.stdin.take().unwrap();
        if let Some(text) = input {
            stdin.write_all(text.as_bytes()).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

#[test]
fn cantor_measure() {
    let o = hdint(&["measure", CANTOR]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(log(2)/log(3), 1)");
}

#[test]
fn overlapping_intervals_merge() {
    let o = hdint(&[
        "measure",
        r#"{"union":[{"interval":[0,1]},{"interval":["1/2","3/2"]}]}"#,
    ]);
    assert_eq!(stdout(&o), "(1, 3/2)");
}

#[test]
fn cancelling_sum_integrates_to_zero() {
    let sum = r#"{"terms":[{"set":{"interval":[0,1]},"expr":{"const":0}}]}"#;
    assert_eq!(stdout(&hdint(&["integrate", sum])), "(0, 0)");
    assert_eq!(stdout(&hdint(&["integrate", ONE_ON_UNIT])), "(1, 1)");
}

#[test]
fn integrate_on_a_subset() {
    let o = hdint(&[
        "integrate",
        ONE_ON_UNIT,
        "--on",
        r#"{"interval":[0,"1/4"]}"#,
    ]);
    assert_eq!(stdout(&o), "(1, 1/4)");
}

#[test]
fn documents_from_stdin() {
    let o = hdint_stdin(&["measure"], Some(CANTOR));
    assert_eq!(stdout(&o), "(log(2)/log(3), 1)");
    let o = hdint_stdin(&["measure", "-"], Some(r#"{"points":[0,1,2]}"#));
    assert_eq!(stdout(&o), "(0, 3)");
}

#[test]
fn json_output_parses_back_as_a_pair() {
    let o = hdint(&["--json", "measure", CANTOR]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let back = hdint_core::HPair::from_json(&v).unwrap();
    assert_eq!(back.to_string(), "(log(2)/log(3), 1)");
}

#[test]
fn distances() {
    let o = hdint(&[
        "distance",
        "sets",
        r#"{"interval":[0,1]}"#,
        r#"{"interval":[0,2]}"#,
    ]);
    assert_eq!(stdout(&o), "(1, 1)");
    let zero = r#"{"terms":[]}"#;
    let o = hdint(&["distance", "functions", ONE_ON_UNIT, zero]);
    assert_eq!(stdout(&o), "(1, 1)");
}

#[test]
fn deficiencies() {
    let tri = r#"{"planar":[{"points":[[0,0],[1,0],[0,1]]}]}"#;
    assert_eq!(stdout(&hdint(&["defi", "convex", tri])), "(2, 1/2)");
    let x = r#"{"terms":[{"set":{"interval":[0,1]},"expr":{"poly":[0,1]}}]}"#;
    assert_eq!(stdout(&hdint(&["defi", "even", x])), "(1, 1)");
}

#[test]
fn exit_codes() {
    assert_eq!(
        hdint(&["measure", r#"{"interval":[0,"#]).status.code(),
        Some(2)
    );
    assert_eq!(
        hdint(&["measure", r#"{"interval":[1,0]}"#]).status.code(),
        Some(1)
    );
    assert_eq!(hdint(&["defi", "roundness", CANTOR]).status.code(), Some(2));
    assert_eq!(hdint(&["check", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(hdint(&["bogus"]).status.code(), Some(2));
    let tails = r#"{"terms":[],"right":{"above":0,"poly":[1]}}"#;
    let o = hdint(&["integrate", tails]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("tails"));
}

#[test]
fn parse_errors_name_the_position() {
    let o = hdint(&["measure", "{\n  \"interval\": [0,\n"]);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn worked_example_table() {
    let o = hdint(&["check", "paper-examples"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("expected") && out.contains("actual"));
    assert!(
        out.ends_with("paper-examples: PASS (19 cases, 0 failures)"),
        "{out}"
    );
}

#[test]
fn known_counterexamples_fail_the_check() {
    let o = hdint(&["check", "pair-metric", "--cases", "300"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("known counterexamples"));
}

#[test]
fn checks_are_deterministic_under_a_seed() {
    let run = || {
        stdout(&hdint(&[
            "--json", "--seed", "17", "check", "fatou", "--cases", "10",
        ]))
    };
    let (a, b) = (run(), run());
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["passed"], Value::Bool(true));
}

#[test]
fn config_file_and_flag_precedence() {
    let path = std::env::temp_dir().join(format!("hdint-test-{}.toml", std::process::id()));
    std::fs::write(&path, "json = true\ndepths = \"1..3\"\n").unwrap();
    let cfg = path.to_str().unwrap();
    let o = hdint(&["--config", cfg, "estimate", "premeasure", CANTOR]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["depths"].as_array().unwrap().len(), 3);
    let o = hdint(&[
        "--config",
        cfg,
        "--depths",
        "2..6",
        "estimate",
        "premeasure",
        CANTOR,
    ]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["depths"].as_array().unwrap().len(), 5);
    std::fs::write(&path, "colour = 1\n").unwrap();
    assert_eq!(
        hdint(&["--config", cfg, "measure", CANTOR]).status.code(),
        Some(2)
    );
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn estimates() {
    let o = hdint(&["--json", "estimate", "dim", CANTOR]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let slope = v["slope"]["mid"].as_f64().unwrap();
    assert!((slope - 2f64.ln() / 3f64.ln()).abs() < 1e-12);
    let x = r#"{"terms":[{"set":{"interval":[0,1]},"expr":{"poly":[0,1]}}]}"#;
    let o = hdint(&["--json", "estimate", "quad", x]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["value"]["mid"].as_f64().unwrap() - 0.5).abs() < 1e-9);
}
