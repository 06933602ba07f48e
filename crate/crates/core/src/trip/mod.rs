//! Benchmark of users with hidden QoE preferences and the ambiguous,
//! emotionally coloured queries they send.

pub mod profile;
pub mod query;
pub mod rewriter;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use profile::{generate_profiles, Category, UserProfile, UserType};
pub use query::{detect_tone, tone_for, AmbiguityType, ClearQuerySpec, QueryRecord, Tone};
pub use rewriter::{LlmRewriter, Rewriter, TemplateRewriter};

use crate::llm::LlmError;
use crate::retrieval::Registry;
use crate::rng::{domain, substream};

#[derive(Debug, Error)]
pub enum TripError {
    #[error("at least one topic is required")]
    NoTopics,
    #[error("topic {topic} already holds {capacity} users, one per user type")]
    TopicCapacity { topic: String, capacity: usize },
    #[error("unknown user type {0:?}")]
    UnknownUserType(String),
    #[error("topic {0:?} has no tools in the registry")]
    NoToolsForTopic(String),
    #[error("rewrite failed: {0}")]
    Rewrite(String),
    #[error(transparent)]
    Llm(#[from] LlmError),
    #[error("invalid dataset:\n  {}", .0.join("\n  "))]
    InvalidDataset(Vec<String>),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetOptions {
    pub num_users: usize,
    pub queries_per_user: usize,
    pub seed: u64,
    #[serde(default = "yes")]
    pub ambiguity: bool,
    #[serde(default = "yes")]
    pub tone: bool,
}

fn yes() -> bool {
    true
}

impl Default for DatasetOptions {
    fn default() -> Self {
        Self {
            num_users: 9,
            queries_per_user: 100,
            seed: 2025,
            ambiguity: true,
            tone: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub seed: u64,
    pub topics: Vec<String>,
    pub profiles: Vec<UserProfile>,
    pub queries: Vec<QueryRecord>,
}

impl Dataset {
    pub fn profile(&self, user_id: &str) -> Option<&UserProfile> {
        self.profiles.iter().find(|p| p.user_id == user_id)
    }

    pub fn topic_of(&self, profile: &UserProfile) -> &str {
        &self.topics[profile.topic_id]
    }

    /// Queries of one user in issue order.
    pub fn queries_for(&self, user_id: &str) -> Vec<&QueryRecord> {
        self.queries.iter().filter(|q| q.user_id == user_id).collect()
    }

    /// Every structural problem, each prefixed with a JSON path.
    pub fn violations(&self, registry: Option<&Registry>) -> Vec<String> {
        let mut out = Vec::new();
        let mut users = BTreeSet::new();
        for (i, p) in self.profiles.iter().enumerate() {
            let path = format!("profiles[{i}]");
            out.extend(p.violations(&path));
            if p.topic_id >= self.topics.len() {
                out.push(format!(
                    "{path}.topic_id: {} but only {} topics",
                    p.topic_id,
                    self.topics.len()
                ));
            }
            if !users.insert(p.user_id.as_str()) {
                out.push(format!("{path}.user_id: duplicate {:?}", p.user_id));
            }
        }
        let mut ids = BTreeSet::new();
        for (i, q) in self.queries.iter().enumerate() {
            let path = format!("queries[{i}]");
            if !ids.insert(q.query_id.as_str()) {
                out.push(format!("{path}.query_id: duplicate {:?}", q.query_id));
            }
            match self.profile(&q.user_id) {
                None => out.push(format!("{path}.user_id: unknown user {:?}", q.user_id)),
                Some(p) => {
                    if self.topics.get(p.topic_id) != Some(&q.topic) {
                        out.push(format!("{path}.topic: {:?} differs from the user's topic", q.topic));
                    }
                }
            }
            if !(0.0..=1.0).contains(&q.emotional_intensity) {
                out.push(format!(
                    "{path}.emotional_intensity: {} outside [0, 1]",
                    q.emotional_intensity
                ));
            }
            if q.clear_text.trim().is_empty() || q.final_text.trim().is_empty() {
                out.push(format!("{path}: empty query text"));
            }
            if let Some(reg) = registry {
                match reg.tool_topic(&q.ground_truth_tool) {
                    None => out.push(format!(
                        "{path}.ground_truth_tool: {:?} is not in the registry",
                        q.ground_truth_tool
                    )),
                    Some(t) if t != q.topic => out.push(format!(
                        "{path}.ground_truth_tool: {:?} belongs to topic {t:?}, query topic is {:?}",
                        q.ground_truth_tool, q.topic
                    )),
                    Some(_) => {}
                }
            }
        }
        out
    }
}

/// Clear queries for one user; the ground truth is drawn uniformly from the
/// tools of the user's topic.
pub fn generate_clear_queries(
    profile: &UserProfile,
    user_index: usize,
    topic: &str,
    registry: &Registry,
    count: usize,
    rewriter: &dyn Rewriter,
    seed: u64,
) -> Result<Vec<(ClearQuerySpec, QueryRecord)>, TripError> {
    let tools = registry.tools_for_topic(topic);
    if tools.is_empty() {
        return Err(TripError::NoToolsForTopic(topic.to_string()));
    }
    let mut rng = substream(seed, &[domain::QUERIES, user_index as u64]);
    let mut out = Vec::with_capacity(count);
    for j in 0..count {
        let tool = *tools.choose(&mut rng).expect("non-empty");
        let slots = query::draw_slots(topic, profile.category, &mut rng);
        let spec = query::spec_for(profile, topic, tool, slots);
        let clear = rewriter.clear_query(&spec)?;
        let record = QueryRecord {
            query_id: query::query_id(&profile.user_id, j),
            user_id: profile.user_id.clone(),
            topic: topic.to_string(),
            ground_truth_tool: tool.tool_id.clone(),
            clear_text: clear.clone(),
            ambiguous_text: clear.clone(),
            final_text: clear,
            ambiguity_type: None,
            tone: tone_for(profile.w1, profile.w2),
            emotional_intensity: 0.0,
        };
        out.push((spec, record));
    }
    Ok(out)
}

/// Picks one ambiguity type uniformly and rewrites `record.ambiguous_text`.
pub fn inject_ambiguity(
    record: &mut QueryRecord,
    spec: &ClearQuerySpec,
    rewriter: &dyn Rewriter,
    seed: u64,
    user_index: usize,
    query_index: usize,
) -> Result<(), TripError> {
    let mut rng = substream(seed, &[domain::AMBIGUITY, user_index as u64, query_index as u64]);
    let kind = AmbiguityType::ALL[rng.random_range(0..AmbiguityType::ALL.len())];
    let variant: u64 = rng.random();
    record.ambiguous_text = rewriter.ambiguate(spec, &record.clear_text, kind, variant)?;
    record.ambiguity_type = Some(kind);
    record.final_text = record.ambiguous_text.clone();
    Ok(())
}

/// Re-voices `record.ambiguous_text` in the tone implied by the profile.
pub fn apply_tone(
    record: &mut QueryRecord,
    profile: &UserProfile,
    rewriter: &dyn Rewriter,
    seed: u64,
    user_index: usize,
    query_index: usize,
) -> Result<(), TripError> {
    let mut rng = substream(seed, &[domain::TONE, user_index as u64, query_index as u64]);
    let intensity = rng.random_range(0.5..=1.0);
    let tone = tone_for(profile.w1, profile.w2);
    record.tone = tone;
    record.emotional_intensity = intensity;
    record.final_text = rewriter.apply_tone(&record.ambiguous_text, tone, intensity)?;
    Ok(())
}

/// Profiles, then per user clear queries, ambiguity and tone.
pub fn build_dataset(
    opts: &DatasetOptions,
    topics: &[String],
    registry: &Registry,
    rewriter: &dyn Rewriter,
) -> Result<Dataset, TripError> {
    let profiles = generate_profiles(opts.num_users, topics, opts.seed)?;
    let mut queries = Vec::with_capacity(opts.num_users * opts.queries_per_user);
    for (u, profile) in profiles.iter().enumerate() {
        let topic = &topics[profile.topic_id];
        let clear = generate_clear_queries(profile, u, topic, registry, opts.queries_per_user, rewriter, opts.seed)?;
        for (j, (spec, mut record)) in clear.into_iter().enumerate() {
            if opts.ambiguity {
                inject_ambiguity(&mut record, &spec, rewriter, opts.seed, u, j)?;
            }
            if opts.tone {
                apply_tone(&mut record, profile, rewriter, opts.seed, u, j)?;
            }
            queries.push(record);
        }
    }
    Ok(Dataset {
        seed: opts.seed,
        topics: topics.to_vec(),
        profiles,
        queries,
    })
}

pub fn export_dataset(dataset: &Dataset, path: &Path) -> Result<(), TripError> {
    let json = serde_json::to_string_pretty(dataset).map_err(|source| TripError::Json {
        path: path.display().to_string(),
        source,
    })?;
    fs::write(path, json).map_err(|source| TripError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Reads a dataset and rejects it if any record is inconsistent.
pub fn import_dataset(path: &Path, registry: Option<&Registry>) -> Result<Dataset, TripError> {
    let text = fs::read_to_string(path).map_err(|source| TripError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let dataset: Dataset = serde_json::from_str(&text).map_err(|source| TripError::Json {
        path: path.display().to_string(),
        source,
    })?;
    let problems = dataset.violations(registry);
    if problems.is_empty() {
        Ok(dataset)
    } else {
        Err(TripError::InvalidDataset(problems))
    }
}

/// Users per category, for summaries.
pub fn category_counts(profiles: &[UserProfile]) -> BTreeMap<Category, usize> {
    let mut counts = BTreeMap::new();
    for p in profiles {
        *counts.entry(p.category).or_insert(0) += 1;
    }
    counts
}
