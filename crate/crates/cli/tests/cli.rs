use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use catnf::pcatlab::gen::{GenConfig, TermGen};
use catnf_cli::{default_names, parse_term, print_term};
use proptest::prelude::*;
use serde_json::Value;

const SUCC_ONE: &str = "(\\n:(o->o)->o->o. \\f:o->o. \\x:o. f (n f x)) (\\f:o->o. f)";
const TWO: &str = "\\f:o->o. \\x:o. f (f x)";

fn catnf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catnf")).args(args).output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("catnf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn diagnostic(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).unwrap()
}

#[test]
fn normal_form_of_one() {
    let o = catnf(&["nf", "\\f:o->o. f"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "\\x0:o->o. \\x1:o. x0 x1");
}

#[test]
fn successor_of_one_is_two() {
    let o = catnf(&["nf", SUCC_ONE]);
    assert_eq!(stdout(&o).trim(), "\\x0:o->o. \\x1:o. x0 (x0 x1)");
    assert_eq!(catnf(&["eq", SUCC_ONE, TWO]).status.code(), Some(0));
    assert_eq!(catnf(&["eq", TWO, SUCC_ONE]).status.code(), Some(0));
}

#[test]
fn term_from_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_catnf"))
        .args(["nf", "--file", "-", "--var", "y:o"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"(\\x:o.\n  x) y").unwrap();
    let o = child.wait_with_output().unwrap();
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "x0");
}

fn tamper_first_beta(v: &mut Value) -> bool {
    match v {
        Value::Object(m) => {
            if m.get("rule") == Some(&Value::from("Beta")) {
                // Church zero in place of the argument: same type, different term.
                let zero = serde_json::json!(["abs", ["arr", ["iota"], ["iota"]], ["abs", ["iota"], ["var", 0]]]);
                let arg = m.get_mut("arg").unwrap();
                assert_ne!(*arg, zero);
                *arg = zero;
                return true;
            }
            m.values_mut().any(tamper_first_beta)
        }
        Value::Array(xs) => xs.iter_mut().any(tamper_first_beta),
        _ => false,
    }
}

#[test]
fn certificates_round_trip_and_tampering_is_caught() {
    let o = catnf(&["nf", "--cert", SUCC_ONE]);
    assert!(o.status.success());
    let mut doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    for key in ["cert", "cert_in_wit", "cert_wit_nf", "witness"] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
    let path = scratch("succ-one.json");
    std::fs::write(&path, doc.to_string()).unwrap();
    let p = path.to_str().unwrap();
    let ok = catnf(&["check", p, "--lhs", SUCC_ONE, "--rhs", TWO]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));

    let wrong = catnf(&["check", p, "--rhs", "\\f:o->o. f"]);
    assert_eq!(wrong.status.code(), Some(1));
    assert_eq!(diagnostic(&wrong)["path"], "$/rhs");

    assert!(tamper_first_beta(doc.get_mut("cert").unwrap()));
    std::fs::write(&path, doc.to_string()).unwrap();
    let bad = catnf(&["check", p]);
    assert_eq!(bad.status.code(), Some(1));
    let d = diagnostic(&bad);
    assert_eq!(d["error"], "bad_node");
    assert!(d["path"].as_str().unwrap().starts_with("$/cert"), "{d}");
}

#[test]
fn standalone_certificate_documents() {
    let t = catnf::church::succ_chain(2);
    let r = catnf::nf4(&t).unwrap();
    let cert = catnf::json::Certificate { ctxt: t.ctxt().clone(), lhs: t.clone(), rhs: r.nf.clone(), deriv: r.cert };
    let path = scratch("standalone.json");
    std::fs::write(&path, cert.to_json().to_string()).unwrap();
    let o = catnf(&["check", path.to_str().unwrap(), "--rhs", TWO]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("valid: "));
}

#[test]
fn malformed_input_is_a_usage_error() {
    let path = scratch("broken.json");
    std::fs::write(&path, "{\"ctxt\": [").unwrap();
    let o = catnf(&["check", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(diagnostic(&o)["error"], "json_syntax");

    std::fs::write(&path, "{\"ctxt\": []}").unwrap();
    let o = catnf(&["check", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(diagnostic(&o)["error"], "json_schema");

    let o = catnf(&["nf", "\\x:o. x x"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(diagnostic(&o)["error"], "type");
    assert_eq!(catnf(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn laws_command_reports_and_exits_zero() {
    let o = catnf(&["laws", "--suite", "ccc", "--bounds", "type_depth=1,term_depth=2", "--json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["passed"], true);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn print_then_parse_is_identity(seed in any::<u64>()) {
        let t = TermGen::new(seed, GenConfig::default()).term();
        let back = parse_term(&print_term(&t), &default_names(t.ctxt())).unwrap();
        prop_assert!(catnf::alpha_eq(&back, &t));
    }
}
