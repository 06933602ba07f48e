use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::episode::EpisodeResult;
use super::metrics::{AggregateMetrics, MovingAveragePoint, UserAggregate};
use super::HarnessError;
use crate::netsim::NetworkTrace;

pub const EPISODES_CSV: &str = "episodes.csv";
pub const AGGREGATES_CSV: &str = "aggregates.csv";
pub const MOVING_AVERAGE_CSV: &str = "moving_average.csv";
pub const TRACES_CSV: &str = "traces.csv";

pub const EPISODE_COLUMNS: &[&str] = &[
    "scenario",
    "seed",
    "policy_name",
    "user_id",
    "category",
    "query_id",
    "timestamp_index",
    "selected_tool",
    "ground_truth_tool",
    "success",
    "t_net_s",
    "t_tool_s",
    "latency_s",
    "qoe",
];

pub const AGGREGATE_COLUMNS: &[&str] = &[
    "scenario",
    "policy_name",
    "user_id",
    "category",
    "queries",
    "mean_qoe",
    "accuracy",
    "mean_latency_s",
];

pub const MOVING_AVERAGE_COLUMNS: &[&str] = &[
    "scenario",
    "policy_name",
    "user_id",
    "category",
    "window_end_index",
    "ma_qoe",
];

pub const TRACE_COLUMNS: &[&str] = &["time_index", "server_id", "latency_s", "scenario", "pattern", "seed"];

/// One `traces.csv` row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub time_index: usize,
    pub server_id: String,
    pub latency_s: f64,
    pub scenario: String,
    pub pattern: String,
    pub seed: u64,
}

/// Latency traces of one scenario run.
pub struct ScenarioTraces<'a> {
    pub scenario: &'a str,
    pub traces: &'a [(u64, NetworkTrace)],
}

pub fn trace_rows(scenario: &str, traces: &[(u64, NetworkTrace)]) -> Vec<TraceRow> {
    let mut rows = Vec::new();
    for (seed, trace) in traces {
        for (s, server_id) in trace.server_ids().iter().enumerate() {
            for (t, &latency_s) in trace.series(s).iter().enumerate() {
                rows.push(TraceRow {
                    time_index: t,
                    server_id: server_id.clone(),
                    latency_s,
                    scenario: scenario.to_string(),
                    pattern: trace.pattern(s).kind.as_str().to_string(),
                    seed: *seed,
                });
            }
        }
    }
    rows
}

fn write_csv<T: Serialize>(path: &Path, columns: &[&str], rows: &[T]) -> Result<(), HarnessError> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(|e| HarnessError::csv(path, e))?;
    w.write_record(columns).map_err(|e| HarnessError::csv(path, e))?;
    for row in rows {
        w.serialize(row).map_err(|e| HarnessError::csv(path, e))?;
    }
    w.flush().map_err(|e| HarnessError::io(path, e))
}

/// Writes the four result files into `out_dir` (created if missing) and
/// returns their paths.
pub fn emit_csv(
    metrics: &AggregateMetrics,
    results: &[EpisodeResult],
    traces: &[ScenarioTraces<'_>],
    out_dir: &Path,
) -> Result<Vec<PathBuf>, HarnessError> {
    fs::create_dir_all(out_dir).map_err(|e| HarnessError::io(out_dir, e))?;
    let episodes = out_dir.join(EPISODES_CSV);
    write_csv(&episodes, EPISODE_COLUMNS, results)?;
    let aggregates = out_dir.join(AGGREGATES_CSV);
    write_csv(&aggregates, AGGREGATE_COLUMNS, &metrics.per_user)?;
    let ma = out_dir.join(MOVING_AVERAGE_CSV);
    write_csv(&ma, MOVING_AVERAGE_COLUMNS, &metrics.moving_average)?;
    let trace_path = out_dir.join(TRACES_CSV);
    let rows: Vec<TraceRow> = traces.iter().flat_map(|s| trace_rows(s.scenario, s.traces)).collect();
    write_csv(&trace_path, TRACE_COLUMNS, &rows)?;
    Ok(vec![episodes, aggregates, ma, trace_path])
}

/// Reads a result file, rejecting it unless its header is exactly `columns`.
pub fn read_csv<T: DeserializeOwned>(path: &Path, columns: &[&str]) -> Result<Vec<T>, HarnessError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| HarnessError::csv(path, e))?;
    let header: Vec<String> = r
        .headers()
        .map_err(|e| HarnessError::csv(path, e))?
        .iter()
        .map(str::to_string)
        .collect();
    if header != columns {
        let missing: Vec<&str> = columns
            .iter()
            .copied()
            .filter(|c| !header.iter().any(|h| h == c))
            .collect();
        let unexpected: Vec<&str> = header
            .iter()
            .map(String::as_str)
            .filter(|h| !columns.contains(h))
            .collect();
        return Err(HarnessError::Schema {
            path: path.display().to_string(),
            message: format!(
                "expected columns [{}]; missing [{}]; unexpected [{}]",
                columns.join(", "),
                missing.join(", "),
                unexpected.join(", ")
            ),
        });
    }
    r.deserialize()
        .collect::<Result<Vec<T>, _>>()
        .map_err(|e| HarnessError::csv(path, e))
}

pub fn read_episodes(path: &Path) -> Result<Vec<EpisodeResult>, HarnessError> {
    read_csv(path, EPISODE_COLUMNS)
}

pub fn read_aggregates(path: &Path) -> Result<Vec<UserAggregate>, HarnessError> {
    read_csv(path, AGGREGATE_COLUMNS)
}

pub fn read_moving_average(path: &Path) -> Result<Vec<MovingAveragePoint>, HarnessError> {
    read_csv(path, MOVING_AVERAGE_COLUMNS)
}

pub fn read_traces(path: &Path) -> Result<Vec<TraceRow>, HarnessError> {
    read_csv(path, TRACE_COLUMNS)
}
