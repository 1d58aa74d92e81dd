use std::process::Command;

use hyperpell_cli::parse::Poly;
use proptest::prelude::*;
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_hyperpell");

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(BIN).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8"))
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let (code, out) = run(&all);
    (code, serde_json::from_str(&out).expect("valid JSON"))
}

const CASES: &[&[&str]] = &[
    &["pell", "--D", "X^6+X"],
    &["pell", "--D", "X^4+X+1", "--max-steps", "3"],
    &["almost-pell", "--D", "X*(X^7-X^3-1)", "--F", "4*X+1"],
    &["almost-pell", "--D", "X^6+X", "--F", "X+1"],
    &["cfrac", "--D", "X^6+X", "--max-steps", "4"],
    &["order", "--D", "X^6+X"],
    &["relation", "--D", "X*(X^7-X^3-1)", "--F", "4*X+1", "--box-bound", "3"],
    &["scan", "--D", "X^6+X+t", "--height-bound", "1"],
    &["pell", "--D", "X^4+t*X^2+1", "--t0", "2"],
    &["pell", "--D", "(X-1)^2"],
    &["pell", "--D", "X^4+"],
    &["verify-examples"],
];

#[test]
fn exit_codes() {
    assert_eq!(run(&["verify-examples"]).0, 0);
    assert_eq!(run(&["pell", "--D", "X^6+X"]).0, 0);
    assert_eq!(run(&["almost-pell", "--D", "X*(X^7-X^3-1)", "--F", "4*X+1"]).0, 0);
    assert_eq!(run(&["pell", "--D", "X^4+X+1", "--max-steps", "3"]).0, 1);
    assert_eq!(run(&["pell", "--D", "X^4+"]).0, 2);
    assert_eq!(run(&["pell", "--D", "(X-1)^2"]).0, 2);
    assert_eq!(run(&["pell", "--D", "X^6+X", "--t0", "x"]).0, 2);
    assert_eq!(run(&["pell", "--D", "X^4+t*X^2+1", "--t0", "2"]).0, 3);
}

#[test]
fn solutions_are_printed_canonically() {
    let (_, out) = run(&["pell", "--D", "X^6+X"]);
    assert!(out.contains("2*X^5+1"), "{out}");
    assert!(out.contains("2*X^2"), "{out}");
    let (_, v) = run_json(&["order", "--D", "X^6+X"]);
    assert_eq!(v["verdict"], "solved");
    assert!(v["entries"].as_array().unwrap().iter().any(|e| e["order"] == 5), "{v}");
}

#[test]
fn text_and_json_agree() {
    for case in CASES {
        let (code_text, text) = run(case);
        let (code_json, json) = run_json(case);
        assert_eq!(code_text, code_json, "{case:?}");
        let verdict = json["verdict"].as_str().unwrap();
        assert!(text.ends_with(&format!("verdict: {verdict}\n")), "{case:?}: {text}");
        assert_eq!(json["command"], case[0]);
    }
}

#[test]
fn reports_match_schema() {
    let schema: Value = serde_json::from_str(include_str!("../schema/report.schema.json")).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    for case in CASES {
        let (_, json) = run_json(case);
        let errors: Vec<String> = validator.iter_errors(&json).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{case:?}: {errors:?}");
    }
}

fn expr() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("X".to_string()),
        Just("t".to_string()),
        (0u32..20).prop_map(|n| n.to_string()),
        (1u32..9, 1u32..9).prop_map(|(a, b)| format!("{a}/{b}")),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})+({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})-({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})*({b})")),
            (inner.clone(), 0u32..4).prop_map(|(a, e)| format!("({a})^{e}")),
            inner.prop_map(|a| format!("-({a})")),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn canonical_printing_round_trips(s in expr()) {
        let p = Poly::parse(&s).unwrap();
        let printed = p.to_string();
        let back = Poly::parse(&printed).unwrap();
        prop_assert_eq!(back.to_qt(), p.to_qt());
        prop_assert_eq!(back.to_string(), printed);
    }
}
