use std::collections::BTreeMap;
use std::io::Write;
use std::process::{Command, Output, Stdio};

use owc::cli::{cmd_descendent, cmd_wallcross, ClassRef, Config, StabilitySpec};
use proptest::prelude::*;
use serde_json::Value;

fn owc(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_owc"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

const SIMPLE: &str = r#"{
    "stabilities": {"minus": {"simple_type": -1}, "plus": {"simple_type": 1}},
    "target": [1, 2],
    "invariants": {"1,0": "A", "0,1": "B", "0,2": "B2", "1,1": "A1", "1,2": "A2"},
    "from": "minus", "to": "plus"
}"#;

const NO_WALL: &str = r#"{
    "classes": {"a": [1, 0], "b": [0, 1]},
    "stabilities": {"t": {"ratio": {"d": [1, 0], "r": [1, 1]}}},
    "chi": [[0, 1], [-1, 0]],
    "invariants": {"a": "za", "b": "zb", "1,1": "1/2"},
    "from": "t", "to": "t"
}"#;

fn no_floats(v: &Value) -> bool {
    match v {
        Value::Number(n) => n.is_i64() || n.is_u64(),
        Value::Array(xs) => xs.iter().all(no_floats),
        Value::Object(m) => m.values().all(no_floats),
        _ => true,
    }
}

#[test]
fn malformed_configurations_are_rejected() {
    let bad = [
        r#"{"chi": [[0, 1], [1, 0]]}"#,
        r#"{"chi": [[0, 1, 2], [-1, 0, 0]]}"#,
        r#"{"bogus": 1}"#,
        r#"{"classes": {"a": [1, 0]}, "invariants": {"c": "1"}}"#,
        r#"{"stabilities": {"t": {"simple_type": 1}}, "from": "s"}"#,
        r#"{"classes": {"a": [1, 0], "b": [1, 0, 0]}}"#,
        r#"{"stabilities": {"t": {"table": {"1,0": ["1"], "0,1": ["1", "2"]}}}}"#,
    ];
    for text in bad {
        assert!(Config::parse(text).is_err(), "accepted {text}");
    }
}

#[test]
fn class_keys_accept_names_and_vectors() {
    let cfg = Config::parse(NO_WALL).unwrap();
    assert_eq!(cfg.dimension(), Some(2));
    assert!(Config::parse(r#"{"classes": {"a": [1, 0]}, "invariants": {"a": "1", "[0,1]": "2", "1,1": "x"}}"#).is_ok());
}

#[test]
fn identical_stabilities_return_the_invariants() {
    let cfg = Config::parse(NO_WALL).unwrap();
    let report = cmd_wallcross(&cfg, None, 8).unwrap();
    assert_eq!(report.machine["[1,0]"], "za");
    assert_eq!(report.machine["[0,1]"], "zb");
    assert_eq!(report.machine["[1,1]"], "1/2");
}

#[test]
fn one_key_descendent_from_the_binary() {
    let out = owc(&["descendent", "-n", "1"], "");
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("DT(σ{k}) = PT(σ{k})·DT0(σ{k})"));
}

#[test]
fn descendent_series_and_keys() {
    let report = cmd_descendent(&[3, -1], Some(2)).unwrap();
    assert_eq!(report.machine["keys"], serde_json::json!([3, -1]));
    assert_eq!(report.machine["lhs"], "DT(σ{k1,k2})");
    assert!(report.machine["series"].is_string());
    assert!(report.human.contains("keys: k1 = 3, k2 = -1"));
}

#[test]
fn machine_output_is_json_without_floats() {
    let out = owc(&["--format", "machine", "wallcross"], SIMPLE);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["[1,2]"], "(1/2)*[[A,B],B] + [A,B2] + [A1,B] + A2");
    assert!(no_floats(&v));

    let out = owc(&["--format", "machine", "descendent", "--keys", "1,2,3"], "");
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(no_floats(&v));
    assert_eq!(v["y"].as_object().unwrap().len(), 8);
}

#[test]
fn config_is_read_from_a_file() {
    let path = std::env::temp_dir().join(format!("owc-cli-{}.json", std::process::id()));
    std::fs::write(&path, SIMPLE).unwrap();
    let out = owc(&["ucoeff", path.to_str().unwrap()], "");
    std::fs::remove_file(&path).ok();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("decompositions of [1,2]"));
    assert!(text.contains("Lie element:"));
}

#[test]
fn vwnum_uses_the_quantum_torus() {
    let out = owc(&["vwnum"], NO_WALL);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "[0,1]\tzb\n[1,0]\tza\n[1,1]\t1/2\n");
    let out = owc(&["vwnum"], SIMPLE);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("chi"));
}

#[test]
fn errors_exit_with_code_two() {
    let out = owc(&["wallcross"], r#"{"chi": [[0, 1], [1, 0]]}"#);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("chi[0][1]"));
    let out = owc(&["wallcross", "/nonexistent/owc.json"], "");
    assert_eq!(out.status.code(), Some(2));
}

fn class_vec() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0i64..=3, 2)
}

fn key(v: &[i64]) -> String {
    format!("{},{}", v[0], v[1])
}

fn stability() -> impl Strategy<Value = StabilitySpec> {
    prop_oneof![
        (-3i64..=3).prop_map(StabilitySpec::SimpleType),
        (class_vec(), class_vec()).prop_map(|(d, r)| StabilitySpec::Ratio { d, r }),
        prop::collection::btree_map(class_vec().prop_map(|v| key(&v)), (-5i64..=5, 1i64..=4), 1..4)
            .prop_map(|m| StabilitySpec::Table(m.into_iter().map(|(k, (a, b))| (k, vec![format!("{a}/{b}")])).collect())),
    ]
}

fn config() -> impl Strategy<Value = Config> {
    (
        prop::collection::btree_map("[a-e]", class_vec(), 0..3),
        prop::collection::btree_map("[s-w]", stability(), 1..3),
        -3i64..=3,
        prop::collection::btree_map(class_vec().prop_map(|v| key(&v)), "[A-Z][0-9]?|-?[0-9]/[1-9]", 0..4),
        prop::option::of(class_vec()),
        prop::option::of(prop::collection::btree_map(class_vec().prop_map(|v| key(&v)), 0u64..3, 0..3)),
        prop::option::of(prop::bool::ANY),
    )
        .prop_map(|(classes, stabilities, x, invariants, target, o, unrefined)| {
            let names: Vec<String> = stabilities.keys().cloned().collect();
            Config {
                classes,
                stabilities,
                chi: Some(vec![vec![0, x], vec![-x, 0]]),
                invariants,
                target: target.map(ClassRef::Vector),
                o,
                unrefined,
                from: names.first().cloned(),
                to: names.last().cloned(),
                ..Config::default()
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn configuration_round_trips(cfg in config()) {
        let text = cfg.to_json();
        let back = Config::parse(&text).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(back.to_json(), text);
    }
}

#[test]
fn named_targets_round_trip() {
    let mut cfg = Config::parse(NO_WALL).unwrap();
    cfg.targets = Some(vec![ClassRef::Name("a".into()), ClassRef::Vector(vec![1, 1])]);
    cfg.fr = Some(BTreeMap::from([("b".to_string(), 2)]));
    assert_eq!(Config::parse(&cfg.to_json()).unwrap(), cfg);
}

/// Exit code 1 signals a failing criterion; the theta limit sign is the
/// known failure.
#[test]
fn selftest_reports_every_criterion() {
    let out = owc(&["selftest"], "");
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().filter(|l| l.starts_with("[PASS]") || l.starts_with("[FAIL]")).collect();
    assert_eq!(lines.len(), 12);
    let failing: Vec<&str> = lines.iter().copied().filter(|l| l.starts_with("[FAIL]")).collect();
    assert_eq!(out.status.code(), Some(if failing.is_empty() { 0 } else { 1 }));
}
