use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rand::seq::IndexedRandom;
use serde::{Deserialize, Serialize};

use super::catalog::CATALOG;
use super::HarnessError;
use crate::llm::Backend;
use crate::netsim::{EwmaParams, FailureModel, LatencyPattern, PatternKind};
use crate::qoe::QoeParams;
use crate::retrieval::{registry_violations, MatchParams, Registry, ServerDescriptor, ToolDescriptor};
use crate::rng::{domain, substream};
use crate::routing::PolicyKind;
use crate::trip::{Category, DatasetOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NetworkKind {
    Random,
    Smooth,
    Custom,
}

impl NetworkKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            NetworkKind::Random => "random",
            NetworkKind::Smooth => "smooth",
            NetworkKind::Custom => "custom",
        }
    }
}

impl fmt::Display for NetworkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NetworkKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random" => Ok(NetworkKind::Random),
            "smooth" => Ok(NetworkKind::Smooth),
            "custom" => Ok(NetworkKind::Custom),
            other => Err(format!(
                "unknown network kind {other:?}; expected random, smooth or custom"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicConfig {
    pub name: String,
    /// Cold-start latency guess and pattern base for the topic's servers.
    pub base_latency_s: f64,
    #[serde(default = "default_l_th")]
    pub l_th: f64,
    #[serde(default = "default_q_max")]
    pub q_max: f64,
}

fn default_l_th() -> f64 {
    QoeParams::DEFAULT_L_TH
}
fn default_q_max() -> f64 {
    QoeParams::DEFAULT_Q_MAX
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictorConfig {
    pub alpha: f64,
    pub window: usize,
    /// Every step, every tool's end-to-end latency is probed and fed to its
    /// predictor; without probes only invoked tools are observed.
    #[serde(default = "yes")]
    pub probe_all: bool,
}

fn yes() -> bool {
    true
}

impl Default for PredictorConfig {
    fn default() -> Self {
        let p = EwmaParams::default();
        Self {
            alpha: p.alpha,
            window: p.window,
            probe_all: true,
        }
    }
}

impl PredictorConfig {
    pub fn ewma(&self) -> EwmaParams {
        EwmaParams {
            alpha: self.alpha,
            window: self.window,
        }
    }
}

/// Initial estimate of a user's weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileInit {
    /// Midpoint of the user's category.
    Category,
    /// Midpoint of the opposite category.
    Mismatched,
    /// (5, 5) for everyone.
    Neutral,
}

impl ProfileInit {
    pub fn weights(&self, category: Category) -> (f64, f64) {
        match self {
            ProfileInit::Category => category.midpoint(),
            ProfileInit::Mismatched => category.opposite().midpoint(),
            ProfileInit::Neutral => (5.0, 5.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileConfig {
    pub update: bool,
    /// Update after every n-th query.
    pub every_n: usize,
    pub delta: f64,
    pub init: ProfileInit,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        Self {
            update: true,
            every_n: 1,
            delta: crate::routing::DEFAULT_DELTA,
            init: ProfileInit::Category,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub network: NetworkKind,
    pub topics: Vec<TopicConfig>,
    pub servers: Vec<ServerDescriptor>,
    pub tools: Vec<ToolDescriptor>,
    pub patterns: Vec<LatencyPattern>,
    #[serde(default)]
    pub retrieval: MatchParams,
    #[serde(default)]
    pub predictor: PredictorConfig,
    #[serde(default)]
    pub failure: FailureModel,
    pub policies: Vec<PolicyKind>,
    pub seeds: Vec<u64>,
    pub dataset: DatasetOptions,
    pub horizon: usize,
    #[serde(default)]
    pub backend: Backend,
    #[serde(default)]
    pub profile: ProfileConfig,
}

impl ScenarioConfig {
    pub fn queries_per_user(&self) -> usize {
        self.dataset.queries_per_user
    }

    pub fn topic(&self, name: &str) -> Option<&TopicConfig> {
        self.topics.iter().find(|t| t.name == name)
    }

    pub fn topic_names(&self) -> Vec<String> {
        self.topics.iter().map(|t| t.name.clone()).collect()
    }

    /// Every violation, each prefixed with its JSON path.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.name.trim().is_empty() {
            out.push("name: must not be empty".into());
        }
        if self.topics.is_empty() {
            out.push("topics: at least one topic is required".into());
        }
        let mut topic_names = BTreeSet::new();
        for (i, t) in self.topics.iter().enumerate() {
            if !topic_names.insert(t.name.as_str()) {
                out.push(format!("topics[{i}].name: duplicate topic '{}'", t.name));
            }
            if !(t.base_latency_s > 0.0 && t.base_latency_s.is_finite()) {
                out.push(format!(
                    "topics[{i}].base_latency_s: must be positive, got {}",
                    t.base_latency_s
                ));
            }
            if !(t.l_th > 0.0 && t.l_th.is_finite()) {
                out.push(format!("topics[{i}].l_th: must be positive, got {}", t.l_th));
            }
            if !(t.q_max > 0.0 && t.q_max.is_finite()) {
                out.push(format!("topics[{i}].q_max: must be positive, got {}", t.q_max));
            }
        }
        out.extend(registry_violations(&self.servers, &self.tools));
        let mut pattern_ids = BTreeMap::new();
        for (i, p) in self.patterns.iter().enumerate() {
            if pattern_ids.insert(p.pattern_id.as_str(), i).is_some() {
                out.push(format!(
                    "patterns[{i}].pattern_id: duplicate pattern '{}'",
                    p.pattern_id
                ));
            }
            out.extend(p.violations(&format!("patterns[{i}]")));
        }
        for (i, s) in self.servers.iter().enumerate() {
            if !topic_names.contains(s.topic.as_str()) {
                out.push(format!(
                    "servers[{i}].topic: server '{}' references missing topic '{}'",
                    s.server_id, s.topic
                ));
            }
            if !pattern_ids.contains_key(s.pattern_id.as_str()) {
                out.push(format!(
                    "servers[{i}].pattern_id: server '{}' references missing pattern '{}'",
                    s.server_id, s.pattern_id
                ));
            }
        }
        for name in &topic_names {
            if !self.servers.iter().any(|s| s.topic == *name) {
                out.push(format!("topics: topic '{name}' has no servers"));
            }
        }
        if self.retrieval.k == 0 {
            out.push("retrieval.k: must be at least 1".into());
        }
        if self.retrieval.m == 0 {
            out.push("retrieval.m: must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.predictor.alpha) {
            out.push(format!("predictor.alpha: {} outside [0, 1]", self.predictor.alpha));
        }
        if self.predictor.window == 0 {
            out.push("predictor.window: must be at least 1".into());
        }
        out.extend(self.failure.violations("failure"));
        if self.policies.is_empty() {
            out.push("policies: at least one policy is required".into());
        }
        if self.seeds.is_empty() {
            out.push("seeds: at least one seed is required".into());
        }
        let mut seen = BTreeSet::new();
        for (i, s) in self.seeds.iter().enumerate() {
            if !seen.insert(s) {
                out.push(format!("seeds[{i}]: duplicate seed {s}"));
            }
        }
        if self.dataset.num_users == 0 {
            out.push("dataset.num_users: must be at least 1".into());
        }
        if self.dataset.queries_per_user == 0 {
            out.push("dataset.queries_per_user: must be at least 1".into());
        }
        if self.horizon < self.dataset.queries_per_user {
            out.push(format!(
                "horizon: {} is shorter than dataset.queries_per_user {}",
                self.horizon, self.dataset.queries_per_user
            ));
        }
        if self.profile.every_n == 0 {
            out.push("profile.every_n: must be at least 1".into());
        }
        if !(self.profile.delta >= 0.0 && self.profile.delta.is_finite()) {
            out.push(format!(
                "profile.delta: must be non-negative, got {}",
                self.profile.delta
            ));
        }
        out
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(HarnessError::Validation(v))
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario config always serializes")
    }

    pub fn save(&self, path: &Path) -> Result<(), HarnessError> {
        fs::write(path, self.to_json() + "\n").map_err(|e| HarnessError::io(path, e))
    }
}

/// Reads and validates a scenario file.
pub fn load_scenario(path: &Path) -> Result<ScenarioConfig, HarnessError> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    let config: ScenarioConfig = serde_json::from_str(&text).map_err(|e| HarnessError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    config.validate()?;
    Ok(config)
}

/// A validated scenario with its registry built.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub registry: Registry,
}

impl Scenario {
    pub fn new(config: ScenarioConfig) -> Result<Self, HarnessError> {
        config.validate()?;
        let registry = Registry::new(config.servers.clone(), config.tools.clone())?;
        Ok(Self { config, registry })
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        Self::new(load_scenario(path)?)
    }

    /// `(server_id, pattern)` in server order.
    pub fn server_patterns(&self) -> Vec<(String, LatencyPattern)> {
        self.config
            .servers
            .iter()
            .map(|s| {
                let p = self
                    .config
                    .patterns
                    .iter()
                    .find(|p| p.pattern_id == s.pattern_id)
                    .expect("validated pattern reference");
                (s.server_id.clone(), p.clone())
            })
            .collect()
    }

    pub fn topic_config(&self, topic: &str) -> &TopicConfig {
        self.config.topic(topic).expect("validated topic reference")
    }

    /// Cold-start latency guess for a tool: its topic's base latency.
    pub fn cold_start(&self, tool_id: &str) -> f64 {
        self.registry
            .tool_topic(tool_id)
            .and_then(|t| self.config.topic(t))
            .map_or(1.0, |t| t.base_latency_s)
    }
}

/// Per-server multipliers of each topic's base latency, so servers within a
/// topic are not identical.
const SERVER_SPREAD: [f64; 7] = [1.0, 0.9, 1.1, 0.95, 1.05, 0.85, 1.15];
const SMOOTH_FACTORS: [f64; 5] = [0.8, 1.0, 1.2, 1.5, 2.0];
const SCENARIO_SEED: u64 = 7;

/// The built-in 35-server scenario with either network assignment.
pub fn default_scenario(network: NetworkKind) -> ScenarioConfig {
    let mut topics = Vec::new();
    let mut servers = Vec::new();
    let mut tools = Vec::new();
    let mut patterns = Vec::new();
    let mut factor_rng = substream(SCENARIO_SEED, &[domain::SCENARIO]);
    for (ti, topic) in CATALOG.iter().enumerate() {
        topics.push(TopicConfig {
            name: topic.name.to_string(),
            base_latency_s: topic.base_latency_s,
            l_th: QoeParams::DEFAULT_L_TH,
            q_max: QoeParams::DEFAULT_Q_MAX,
        });
        for (si, server) in topic.servers.iter().enumerate() {
            let base = topic.base_latency_s * SERVER_SPREAD[si % SERVER_SPREAD.len()];
            let pattern_id = format!("p-{}", server.id);
            let pattern = match network {
                NetworkKind::Smooth => {
                    let factor = *SMOOTH_FACTORS.choose(&mut factor_rng).expect("non-empty");
                    LatencyPattern::preset(&pattern_id, PatternKind::SmoothScaled, base).with_scale(factor)
                }
                _ => {
                    let kind = PatternKind::RANDOM_SCENARIO[(si + ti) % PatternKind::RANDOM_SCENARIO.len()];
                    let mut p = LatencyPattern::preset(&pattern_id, kind, base);
                    p.phase = si as f64 * 0.9;
                    p
                }
            };
            patterns.push(pattern);
            let tool_ids: Vec<String> = server.tools.iter().map(|(n, _)| format!("{}.{n}", server.id)).collect();
            for (name, description) in server.tools {
                tools.push(ToolDescriptor {
                    tool_id: format!("{}.{name}", server.id),
                    server_id: server.id.to_string(),
                    name: name.to_string(),
                    description: description.to_string(),
                });
            }
            servers.push(ServerDescriptor {
                server_id: server.id.to_string(),
                topic: topic.name.to_string(),
                description: server.description.to_string(),
                tool_ids,
                is_real: server.is_real,
                pattern_id,
            });
        }
    }
    let queries = 100;
    ScenarioConfig {
        name: network.as_str().to_string(),
        network,
        topics,
        servers,
        tools,
        patterns,
        retrieval: MatchParams::default(),
        predictor: PredictorConfig::default(),
        failure: FailureModel::default(),
        policies: PolicyKind::ALL.to_vec(),
        seeds: vec![1, 2, 3, 4, 5],
        dataset: DatasetOptions {
            num_users: 9,
            queries_per_user: queries,
            seed: 2025,
            ambiguity: true,
            tone: true,
        },
        horizon: queries,
        backend: Backend::Mock,
        profile: ProfileConfig::default(),
    }
}
