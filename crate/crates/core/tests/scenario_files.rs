mod common;

use std::fs;

use common::tiny_config;
use qoe_route::harness::{default_scenario, load_scenario, HarnessError, NetworkKind, Scenario};

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn saved_scenario_loads_back_unchanged() {
    let dir = tempfile::tempdir().unwrap();
    for network in [NetworkKind::Random, NetworkKind::Smooth] {
        let config = default_scenario(network);
        let path = dir.path().join(format!("{network}.json"));
        config.save(&path).unwrap();
        let loaded = load_scenario(&path).unwrap();
        assert_eq!(loaded, config);
        Scenario::load(&path).unwrap();
    }
}

#[test]
fn tool_on_missing_server_names_both_ids() {
    let mut config = tiny_config();
    config.tools[0].server_id = "ghost-server".into();
    let dir = tempfile::tempdir().unwrap();
    let path = write(&dir, "bad.json", &config.to_json());
    let err = load_scenario(&path).unwrap_err();
    assert!(matches!(err, HarnessError::Validation(_)));
    let msg = err.to_string();
    assert!(msg.contains("flights.book_flight"), "{msg}");
    assert!(msg.contains("ghost-server"), "{msg}");
    assert_eq!(err.exit_code(), 1);
}

#[test]
fn empty_policy_list_is_rejected() {
    let mut config = tiny_config();
    config.policies.clear();
    let err = Scenario::new(config).unwrap_err();
    assert!(err.to_string().contains("policies"), "{err}");
    assert_eq!(err.exit_code(), 1);
}

#[test]
fn every_violation_is_reported_at_once() {
    let mut config = tiny_config();
    config.seeds = vec![3, 3];
    config.retrieval.k = 0;
    config.predictor.alpha = 1.5;
    config.horizon = 5;
    let violations = config.violations();
    for needle in ["seeds[1]", "retrieval.k", "predictor.alpha", "horizon"] {
        assert!(
            violations.iter().any(|v| v.contains(needle)),
            "{needle} missing from {violations:?}"
        );
    }
}

#[test]
fn malformed_json_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(&dir, "broken.json", "{\"name\": \"x\",");
    let err = load_scenario(&path).unwrap_err();
    assert!(matches!(err, HarnessError::Parse { .. }));
    assert_eq!(err.exit_code(), 1);
}

#[test]
fn unknown_network_kind_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let text = tiny_config().to_json().replace("\"custom\"", "\"lunar\"");
    let path = write(&dir, "lunar.json", &text);
    let err = load_scenario(&path).unwrap_err();
    assert!(matches!(err, HarnessError::Parse { .. }), "{err}");
}

#[test]
fn missing_file_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let err = load_scenario(&dir.path().join("absent.json")).unwrap_err();
    assert!(matches!(err, HarnessError::Io { .. }));
    assert_eq!(err.exit_code(), 2);
}
