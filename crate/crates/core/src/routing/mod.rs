//! Routing policies: semantic-only baselines, a latency-greedy variant and
//! the QoE-aware decision that trades relevance against predicted delay
//! using an estimated per-user profile.

mod policies;
pub mod profile_update;
pub mod prompt;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use policies::{
    dir_rout, jaunt_decide, jaunt_greedy, mock_jaunt_scores, mock_select, pre_rout, predict_category, refine_query,
};
pub use profile_update::{apply_update_rule, update_profile, UpdateOutcome, DEFAULT_DELTA};

use crate::llm::LlmError;
use crate::retrieval::{candidate_set, MatchParams, Registry, RetrievalError};

#[derive(Debug, Error)]
pub enum RoutingError {
    #[error("no candidate tools to choose from")]
    EmptyCandidates,
    #[error(transparent)]
    Retrieval(#[from] RetrievalError),
    #[error(transparent)]
    Llm(#[from] LlmError),
    #[error("unknown policy {0:?}; expected dir_rout, pre_rout, jaunt_greedy or jaunt")]
    UnknownPolicy(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyKind {
    DirRout,
    PreRout,
    JauntGreedy,
    Jaunt,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 4] = [
        PolicyKind::DirRout,
        PolicyKind::PreRout,
        PolicyKind::JauntGreedy,
        PolicyKind::Jaunt,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            PolicyKind::DirRout => "dir_rout",
            PolicyKind::PreRout => "pre_rout",
            PolicyKind::JauntGreedy => "jaunt_greedy",
            PolicyKind::Jaunt => "jaunt",
        }
    }

    /// Display name used in reports.
    pub fn label(&self) -> &'static str {
        match self {
            PolicyKind::DirRout => "DirRout",
            PolicyKind::PreRout => "PreRout",
            PolicyKind::JauntGreedy => "JAUNT-Greedy",
            PolicyKind::Jaunt => "JAUNT",
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PolicyKind {
    type Err = RoutingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.to_ascii_lowercase().replace('-', "_");
        PolicyKind::ALL
            .into_iter()
            .find(|p| p.as_str() == norm || p.label().to_ascii_lowercase().replace('-', "_") == norm)
            .ok_or_else(|| RoutingError::UnknownPolicy(s.to_string()))
    }
}

/// Whether model-backed steps run the built-in rules directly or go through
/// prompts to a live model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecisionMode {
    Mock,
    Live,
}

/// The router's estimate of a user. Never holds the true weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentProfileView {
    pub user_id: String,
    pub est_w1: f64,
    pub est_w2: f64,
    pub preference_notes: String,
    pub update_count: u32,
}

pub const WEIGHT_MIN: f64 = 1.0;
pub const WEIGHT_MAX: f64 = 10.0;

impl AgentProfileView {
    pub fn new(user_id: impl Into<String>, est_w1: f64, est_w2: f64) -> Self {
        let est_w1 = est_w1.clamp(WEIGHT_MIN, WEIGHT_MAX);
        let est_w2 = est_w2.clamp(WEIGHT_MIN, WEIGHT_MAX);
        Self {
            user_id: user_id.into(),
            est_w1,
            est_w2,
            preference_notes: profile_update::describe_weights(est_w1, est_w2),
            update_count: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredCandidate {
    pub tool_id: String,
    pub server_id: String,
    pub description: String,
    pub semantic_score: f64,
    pub predicted_latency: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoutingContext {
    pub raw_query: String,
    pub refined_text: String,
    /// Ordered by semantic score (descending), then tool id.
    pub candidates: Vec<ScoredCandidate>,
    pub profile: AgentProfileView,
    pub l_th: f64,
}

impl RoutingContext {
    /// Hierarchical candidates for the refined text, each paired with its
    /// latency prediction.
    pub fn build(
        raw_query: &str,
        refined_text: &str,
        registry: &Registry,
        params: MatchParams,
        predict_latency: impl Fn(&str) -> f64,
        profile: AgentProfileView,
        l_th: f64,
    ) -> Result<Self, RoutingError> {
        let ranked = candidate_set(refined_text, raw_query, registry, None, params)?;
        let candidates = ranked
            .into_iter()
            .map(|c| ScoredCandidate {
                predicted_latency: predict_latency(&c.tool_id),
                description: registry
                    .tool(&c.tool_id)
                    .map(|t| t.description.clone())
                    .unwrap_or_default(),
                tool_id: c.tool_id,
                server_id: c.server_id,
                semantic_score: c.semantic_score,
            })
            .collect();
        Ok(Self {
            raw_query: raw_query.to_string(),
            refined_text: refined_text.to_string(),
            candidates,
            profile,
            l_th,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoutingDecision {
    pub selected_tool: String,
    pub ranking: Vec<String>,
    pub rationale: String,
    pub policy_name: String,
}
