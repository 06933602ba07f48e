mod common;

use std::fs;

use common::{half_ambiguous_dataset, tiny_scenario};
use qoe_route::harness::{
    aggregate, emit_csv, mock_llm, read_aggregates, read_episodes, read_moving_average, read_traces, run_experiment,
    AggregateMetrics, HarnessError, ScenarioTraces, AGGREGATES_CSV, EPISODES_CSV, MOVING_AVERAGE_CSV, TRACES_CSV,
};
use qoe_route::llm::TextGenerator;
use qoe_route::routing::DecisionMode;

fn header(path: &std::path::Path) -> String {
    fs::read_to_string(path).unwrap().lines().next().unwrap().to_string()
}

fn emit_fixture(dir: &std::path::Path) -> (Vec<qoe_route::harness::EpisodeResult>, AggregateMetrics) {
    let scenario = tiny_scenario();
    let dataset = half_ambiguous_dataset();
    let llm = mock_llm(&scenario);
    let out = run_experiment(
        &scenario,
        &dataset,
        &llm as &dyn TextGenerator,
        DecisionMode::Mock,
        false,
    )
    .unwrap();
    let metrics = aggregate(&out.results);
    let traces = [ScenarioTraces {
        scenario: &scenario.config.name,
        traces: &out.traces,
    }];
    emit_csv(&metrics, &out.results, &traces, dir).unwrap();
    (out.results, metrics)
}

#[test]
fn headers_have_the_documented_column_order() {
    let dir = tempfile::tempdir().unwrap();
    emit_fixture(dir.path());
    let p = dir.path();
    assert_eq!(
        header(&p.join(EPISODES_CSV)),
        "scenario,seed,policy_name,user_id,category,query_id,timestamp_index,selected_tool,\
         ground_truth_tool,success,t_net_s,t_tool_s,latency_s,qoe"
    );
    assert_eq!(
        header(&p.join(AGGREGATES_CSV)),
        "scenario,policy_name,user_id,category,queries,mean_qoe,accuracy,mean_latency_s"
    );
    assert_eq!(
        header(&p.join(MOVING_AVERAGE_CSV)),
        "scenario,policy_name,user_id,category,window_end_index,ma_qoe"
    );
    assert_eq!(
        header(&p.join(TRACES_CSV)),
        "time_index,server_id,latency_s,scenario,pattern,seed"
    );
}

#[test]
fn episodes_round_trip_and_aggregates_recompute() {
    let dir = tempfile::tempdir().unwrap();
    let (results, metrics) = emit_fixture(dir.path());
    let episodes = read_episodes(&dir.path().join(EPISODES_CSV)).unwrap();
    assert_eq!(episodes.len(), results.len());
    for (a, b) in episodes.iter().zip(&results) {
        assert_eq!(
            (&a.query_id, &a.selected_tool, a.success, a.seed),
            (&b.query_id, &b.selected_tool, b.success, b.seed)
        );
        assert!((a.qoe - b.qoe).abs() < 1e-9);
        assert!((a.latency_s - b.latency_s).abs() < 1e-9);
    }
    let recomputed = aggregate(&episodes);
    let written = read_aggregates(&dir.path().join(AGGREGATES_CSV)).unwrap();
    assert_eq!(written.len(), metrics.per_user.len());
    for (w, r) in written.iter().zip(&recomputed.per_user) {
        assert_eq!(
            (&w.policy_name, &w.user_id, w.queries),
            (&r.policy_name, &r.user_id, r.queries)
        );
        assert!((w.mean_qoe - r.mean_qoe).abs() < 1e-9);
        assert!((w.accuracy - r.accuracy).abs() < 1e-9);
        assert!((w.mean_latency_s - r.mean_latency_s).abs() < 1e-9);
    }
    let ma = read_moving_average(&dir.path().join(MOVING_AVERAGE_CSV)).unwrap();
    // 20 queries with a window of 10 leave 11 points per (policy, user).
    assert_eq!(ma.len(), 4 * 11);
    for (w, r) in ma.iter().zip(&recomputed.moving_average) {
        assert_eq!(w.window_end_index, r.window_end_index);
        assert!((w.ma_qoe - r.ma_qoe).abs() < 1e-9);
    }
    let traces = read_traces(&dir.path().join(TRACES_CSV)).unwrap();
    // Two seeds, two servers, horizon 20.
    assert_eq!(traces.len(), 2 * 2 * 20);
    assert!(traces.iter().all(|t| t.pattern == "stable_normal"));
}

#[test]
fn empty_results_produce_header_only_files() {
    let dir = tempfile::tempdir().unwrap();
    let paths = emit_csv(&AggregateMetrics::default(), &[], &[], dir.path()).unwrap();
    assert_eq!(paths.len(), 4);
    for p in &paths {
        let text = fs::read_to_string(p).unwrap();
        assert_eq!(text.lines().count(), 1, "{}", p.display());
    }
    assert!(read_episodes(&paths[0]).unwrap().is_empty());
    assert!(read_aggregates(&paths[1]).unwrap().is_empty());
}

#[test]
fn renamed_column_is_a_schema_error() {
    let dir = tempfile::tempdir().unwrap();
    emit_fixture(dir.path());
    let path = dir.path().join(EPISODES_CSV);
    let text = fs::read_to_string(&path).unwrap().replacen("latency_s", "delay_s", 1);
    fs::write(&path, text).unwrap();
    let err = read_episodes(&path).unwrap_err();
    assert!(matches!(err, HarnessError::Schema { .. }), "{err}");
    let msg = err.to_string();
    assert!(
        msg.contains("missing [latency_s]") && msg.contains("unexpected [delay_s]"),
        "{msg}"
    );
    assert_eq!(err.exit_code(), 1);
}

#[test]
fn reordered_columns_are_a_schema_error() {
    let dir = tempfile::tempdir().unwrap();
    emit_fixture(dir.path());
    let path = dir.path().join(TRACES_CSV);
    let text = fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    lines.next();
    let body: Vec<&str> = lines.collect();
    fs::write(
        &path,
        format!(
            "server_id,time_index,latency_s,scenario,pattern,seed\n{}\n",
            body.join("\n")
        ),
    )
    .unwrap();
    assert!(matches!(read_traces(&path), Err(HarnessError::Schema { .. })));
}

#[test]
fn emission_is_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    emit_fixture(a.path());
    emit_fixture(b.path());
    for name in [EPISODES_CSV, AGGREGATES_CSV, MOVING_AVERAGE_CSV, TRACES_CSV] {
        assert_eq!(
            fs::read(a.path().join(name)).unwrap(),
            fs::read(b.path().join(name)).unwrap(),
            "{name}"
        );
    }
}
