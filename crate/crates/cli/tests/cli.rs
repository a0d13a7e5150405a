use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use logdiff::logops::PbwDocument;
use logdiff::{parse_operator, FrameDocument, Rewriter};

fn logdiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logdiff"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn temp_file(name: &str, contents: &[u8]) -> PathBuf {
    let path = std::env::temp_dir().join(format!("logdiff-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn perversity_of_normal_crossing() {
    let o = logdiff(&["perversity", "--vars", "x,y", "-f", "x*y", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let j = json(&o);
    assert_eq!(j["verdict"], "perverse-certified");
    assert_eq!(j["quotient_dimension"], 2);
}

#[test]
fn perversity_of_moving_four_lines() {
    let o = logdiff(&["perversity", "--vars", "x,y,t", "-f", "x*y*(x+y)*(y+t*x)", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let j = json(&o);
    assert_eq!(j["verdict"], "inconclusive");
    assert_eq!(j["free"], true);
    assert_eq!(j["regular"], false);
    // the recorded frame re-verifies
    let doc: FrameDocument = serde_json::from_value(j["frame"].clone()).unwrap();
    assert_eq!(doc.to_frame().unwrap().n(), 3);
}

#[test]
fn normal_form_table() {
    let o = logdiff(&["normal-form", "--vars", "x,y", "-f", "x*y", "-P", "x^2*d_x^2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "delta_1^2: 1\ndelta_1: -1\n");
}

#[test]
fn normal_form_json_reloads_to_the_same_operator() {
    let p = "x^2*d_x^2 + y*d_x*d_y";
    let o = logdiff(&["normal-form", "--example", "normal-crossing-2", "-P", p, "--json"]);
    assert_eq!(o.status.code(), Some(1), "y d_x d_y is not logarithmic along xy");
    let o = logdiff(&["normal-form", "--example", "cusp", "-P", "(3*x*d_x + 2*y*d_y)^2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: PbwDocument = serde_json::from_slice(&o.stdout).unwrap();
    let (frame, w) = doc.load().unwrap();
    let op = parse_operator("(3*x*d_x + 2*y*d_y)^2", &doc.frame.vars).unwrap();
    assert_eq!(Rewriter::new(&frame).expand(&w), op);
}

#[test]
fn rejection_prints_a_witness() {
    let o = logdiff(&["normal-form", "--vars", "x,y", "-f", "x*y", "-P", "d_x", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let j = json(&o);
    assert_eq!(j["logarithmic"], false);
    assert_eq!(j["stage"], "commutator");
    assert_eq!(j["witness"], "y");
}

#[test]
fn saito_output_feeds_later_commands() {
    let o = logdiff(&[
        "saito", "--vars", "x,y", "-f", "x^2 - y^3", "--basis", "3*x*d_x + 2*y*d_y", "--basis", "3*y^2*d_x + 2*x*d_y",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["det"], "-6*y^3 + 6*x^2");
    let path = temp_file("cusp.json", &o.stdout);
    let p = path.to_str().unwrap();
    let o = logdiff(&["complex-check", "--frame", p]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    // a tampered determinant is refused on ingestion
    let mut j: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    j["det"] = Value::from("x");
    let bad = temp_file("cusp-bad.json", j.to_string().as_bytes());
    let o = logdiff(&["spencer", "--frame", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let _ = std::fs::remove_file(path);
    let _ = std::fs::remove_file(bad);
}

#[test]
fn saito_rejects_a_corrupted_basis() {
    let o = logdiff(&["saito", "--vars", "x,y", "-f", "x^2 - y^3", "--basis", "x*d_x + y*d_y", "--basis", "3*y^2*d_x + 2*x*d_y"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not logarithmic"));
}

#[test]
fn basis_of_the_cusp_and_a_non_free_arrangement() {
    let o = logdiff(&["basis", "--vars", "x,y", "-f", "x^2 - y^3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: FrameDocument = serde_json::from_slice(&o.stdout).unwrap();
    doc.to_frame().unwrap();
    let o = logdiff(&["basis", "--vars", "x,y,z", "-f", "x*y*z*(x + y + z)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("no free basis"));
}

#[test]
fn shifts_both_ways() {
    let o = logdiff(&["shift", "--example", "normal-crossing-1", "-P", "x*d_x", "--power", "2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let j = json(&o);
    assert_eq!(j["k"], 2);
    assert_eq!(j["q"], "x*d_x + 2");
    let o = logdiff(&["shift", "--example", "normal-crossing-1", "-P", "x*d_x", "--right", "--json"]);
    let j = json(&o);
    assert_eq!(j["q"], "x*d_x - 1");
    assert_eq!(j["k"], 1);
}

#[test]
fn forms_and_complexes() {
    let o = logdiff(&["dual-basis", "--example", "normal-crossing-2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["forms"][0]["coefficients"]["1"], "y / f^1");
    for lambda in ["0", "1/2", "-3"] {
        let o = logdiff(&["derham-check", "--example", "cusp", "--lambda", lambda, "--samples", "6", "--seed", "3"]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
    let o = logdiff(&["spencer", "--example", "cusp", "--json"]);
    assert_eq!(json(&o)["ranks"], serde_json::json!([1, 2, 1]));
    let o = logdiff(&["graded-spencer", "--example", "normal-crossing-3", "--json"]);
    assert_eq!(json(&o)["ranks"], serde_json::json!([1, 3, 3, 1]));
    let o = logdiff(&["koszul", "--vars", "x,y", "-e", "x*xi_x", "-e", "y*xi_y"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn regularity() {
    let o = logdiff(&["regular", "--vars", "x,y", "-e", "x*xi_x", "-e", "y*xi_y", "--order", "lex"]);
    assert_eq!(o.status.code(), Some(0));
    let o = logdiff(&["regular", "--vars", "x,y", "-e", "x*xi_x", "-e", "x*xi_y", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["quotient_dimension"], 3);
    let o = logdiff(&["regular", "--example", "moving-four-lines"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn symbol_chains() {
    let o = logdiff(&["symbol-chain", "--vars", "x", "-f", "x", "--symbol", "x^2*xi_x^2", "--json"]);
    assert_eq!(json(&o)["chain"], serde_json::json!(["x^2*xi_x^2", "2*x*xi_x", "2"]));
    let o = logdiff(&["symbol-chain", "--vars", "x", "-f", "x", "-P", "x*d_x^2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn check_log() {
    let o = logdiff(&["check-log", "--vars", "x,y", "-f", "x^2-y^3", "-P", "3*y^2*d_x+2*x*d_y"]);
    assert_eq!(o.status.code(), Some(0));
    let o = logdiff(&["check-log", "--vars", "x,y", "-f", "x*y", "-P", "d_x"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("= y"));
}

#[test]
fn usage_errors_and_timeouts() {
    let o = logdiff(&["normal-form", "--vars", "x,y", "-f", "x y", "-P", "d_x"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1:3"));
    let o = logdiff(&["normal-form", "--vars", "x,y", "-f", "x*z", "-P", "d_x"]);
    assert_eq!(o.status.code(), Some(2));
    let o = logdiff(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    let o = logdiff(&["basis", "--vars", "x,y", "-f", "x*y", "--deadline-ms", "0"]);
    assert_eq!(o.status.code(), Some(3));
    let o = logdiff(&["basis", "--vars", "x,y,z", "-f", "x*y*z*(x + y + z)", "--bound", "2"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn examples_are_listed() {
    let o = logdiff(&["examples", "--json"]);
    let names: Vec<String> = json(&o)
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["name"].as_str().unwrap().to_string())
        .collect();
    assert!(names.contains(&"moving-four-lines".to_string()));
    assert_eq!(names.len(), 6);
}
