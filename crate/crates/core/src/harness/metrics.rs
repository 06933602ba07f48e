use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::episode::EpisodeResult;
use crate::trip::Category;

pub const MA_WINDOW: usize = 10;

/// Per (scenario, policy, user) means. Field order is the `aggregates.csv`
/// column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserAggregate {
    pub scenario: String,
    pub policy_name: String,
    pub user_id: String,
    pub category: Category,
    pub queries: usize,
    pub mean_qoe: f64,
    /// Fraction of queries routed to the ground-truth tool and executed
    /// successfully.
    pub accuracy: f64,
    pub mean_latency_s: f64,
}

/// One point of the moving-average curve. Field order is the
/// `moving_average.csv` column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MovingAveragePoint {
    pub scenario: String,
    pub policy_name: String,
    pub user_id: String,
    pub category: Category,
    pub window_end_index: usize,
    pub ma_qoe: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AggregateMetrics {
    pub per_user: Vec<UserAggregate>,
    pub moving_average: Vec<MovingAveragePoint>,
}

/// Unweighted mean over each run of `window` consecutive values; empty when
/// the series is shorter than the window.
pub fn moving_average(series: &[f64], window: usize) -> Vec<f64> {
    if window == 0 || series.len() < window {
        return Vec::new();
    }
    series
        .windows(window)
        .map(|w| w.iter().sum::<f64>() / window as f64)
        .collect()
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

type GroupKey = (String, String, String);

/// Groups rows by (scenario, policy, user) in order of first appearance.
fn groups(results: &[EpisodeResult]) -> Vec<(GroupKey, Vec<&EpisodeResult>)> {
    let mut order: Vec<GroupKey> = Vec::new();
    let mut map: BTreeMap<GroupKey, Vec<&EpisodeResult>> = BTreeMap::new();
    for r in results {
        let key = (r.scenario.clone(), r.policy_name.clone(), r.user_id.clone());
        map.entry(key.clone())
            .or_insert_with(|| {
                order.push(key);
                Vec::new()
            })
            .push(r);
    }
    order
        .into_iter()
        .map(|k| {
            let rows = map.remove(&k).expect("key recorded");
            (k, rows)
        })
        .collect()
}

/// Means per (scenario, policy, user) over all seeds, and the moving average
/// of the per-query-index QoE (averaged across seeds first), so a user with
/// `n` queries gets `n - 9` points.
pub fn aggregate(results: &[EpisodeResult]) -> AggregateMetrics {
    let mut metrics = AggregateMetrics::default();
    for ((scenario, policy_name, user_id), rows) in groups(results) {
        let category = rows[0].category;
        metrics.per_user.push(UserAggregate {
            scenario: scenario.clone(),
            policy_name: policy_name.clone(),
            user_id: user_id.clone(),
            category,
            queries: rows.len(),
            mean_qoe: mean(rows.iter().map(|r| r.qoe)),
            accuracy: mean(rows.iter().map(|r| if r.success { 1.0 } else { 0.0 })),
            mean_latency_s: mean(rows.iter().map(|r| r.latency_s)),
        });
        let mut by_index: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
        for r in &rows {
            let e = by_index.entry(r.timestamp_index).or_insert((0.0, 0));
            e.0 += r.qoe;
            e.1 += 1;
        }
        let indices: Vec<usize> = by_index.keys().copied().collect();
        let series: Vec<f64> = by_index.values().map(|(s, n)| s / *n as f64).collect();
        for (i, ma) in moving_average(&series, MA_WINDOW).into_iter().enumerate() {
            metrics.moving_average.push(MovingAveragePoint {
                scenario: scenario.clone(),
                policy_name: policy_name.clone(),
                user_id: user_id.clone(),
                category,
                window_end_index: indices[i + MA_WINDOW - 1],
                ma_qoe: ma,
            });
        }
    }
    metrics
}

#[derive(Debug, Clone, PartialEq)]
pub struct CategorySummary {
    pub scenario: String,
    pub category: Category,
    pub policy_name: String,
    pub mean_qoe: f64,
    pub accuracy: f64,
    pub mean_latency_s: f64,
    pub rows: usize,
}

/// Means per (scenario, category, policy) pooled over users and seeds.
pub fn category_summary(results: &[EpisodeResult]) -> Vec<CategorySummary> {
    let mut map: BTreeMap<(String, Category, String), Vec<&EpisodeResult>> = BTreeMap::new();
    for r in results {
        map.entry((r.scenario.clone(), r.category, r.policy_name.clone()))
            .or_default()
            .push(r);
    }
    map.into_iter()
        .map(|((scenario, category, policy_name), rows)| CategorySummary {
            scenario,
            category,
            policy_name,
            mean_qoe: mean(rows.iter().map(|r| r.qoe)),
            accuracy: mean(rows.iter().map(|r| if r.success { 1.0 } else { 0.0 })),
            mean_latency_s: mean(rows.iter().map(|r| r.latency_s)),
            rows: rows.len(),
        })
        .collect()
}
