//! Hierarchical semantic matching.
//!
//! Servers are ranked against the refined description first; the top `k`
//! survive, and inside each survivor the raw query ranks that server's tools.
//! The union of the per-server top `m` tools is the candidate set handed to
//! the routing policies.

mod bm25;
mod registry;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bm25::{bm25_scores, Bm25, Bm25Index, Bm25Params};
pub use registry::{registry_violations, Registry, ServerDescriptor, ToolDescriptor};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RetrievalError {
    #[error("registry has no servers")]
    EmptyRegistry,
    #[error("invalid registry: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error("unknown server '{0}'")]
    UnknownServer(String),
    #[error("unknown topic '{0}'")]
    UnknownTopic(String),
    #[error("{name} must be >= 1")]
    ZeroLimit { name: &'static str },
}

/// Builds a scorer over a fixed corpus. BM25 is the built-in backend; an
/// embedding model would slot in here.
pub trait Similarity: Send + Sync {
    fn build(&self, corpus: &[Vec<String>]) -> Box<dyn CorpusScorer>;
}

pub trait CorpusScorer: Send + Sync {
    /// One non-negative score per corpus document, in corpus order.
    fn scores(&self, query: &[String]) -> Vec<f64>;
}

/// Lowercases and splits on anything that is not alphanumeric. No stemming,
/// no stop words.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedServer {
    pub server_id: String,
    pub score: f64,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedCandidate {
    pub tool_id: String,
    pub server_id: String,
    pub semantic_score: f64,
    pub rank: usize,
}

/// Stage configuration. `tool_stage_uses_refined` swaps the raw query for the
/// refined text inside each server (ablation switch; off by default).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchParams {
    pub k: usize,
    pub m: usize,
    #[serde(default)]
    pub tool_stage_uses_refined: bool,
}

impl Default for MatchParams {
    fn default() -> Self {
        Self {
            k: 3,
            m: 3,
            tool_stage_uses_refined: false,
        }
    }
}

fn by_score_then_id(a: (f64, &str), b: (f64, &str)) -> Ordering {
    b.0.total_cmp(&a.0).then_with(|| a.1.cmp(b.1))
}

/// The `min(k, |servers|)` best servers for `refined_text`, optionally limited
/// to one topic. Ties go to the lexicographically smaller server id.
pub fn top_k_servers(
    refined_text: &str,
    registry: &Registry,
    topic: Option<&str>,
    k: usize,
) -> Result<Vec<RankedServer>, RetrievalError> {
    if k == 0 {
        return Err(RetrievalError::ZeroLimit { name: "k" });
    }
    let query = tokenize(refined_text);
    let mut scored = registry.server_scores(topic, &query)?;
    let servers = registry.servers();
    scored.sort_by(|a, b| by_score_then_id((a.1, &servers[a.0].server_id), (b.1, &servers[b.0].server_id)));
    Ok(scored
        .into_iter()
        .take(k)
        .enumerate()
        .map(|(i, (idx, score))| RankedServer {
            server_id: servers[idx].server_id.clone(),
            score,
            rank: i + 1,
        })
        .collect())
}

/// The `min(m, |tools|)` best tools of one server for `query_text`, scored
/// against that server's tool descriptions only.
pub fn top_m_tools(
    query_text: &str,
    server_id: &str,
    m: usize,
    registry: &Registry,
) -> Result<Vec<RankedCandidate>, RetrievalError> {
    if m == 0 {
        return Err(RetrievalError::ZeroLimit { name: "m" });
    }
    let server_idx = registry
        .server_index(server_id)
        .ok_or_else(|| RetrievalError::UnknownServer(server_id.to_string()))?;
    let query = tokenize(query_text);
    let tools = registry.tools();
    let mut scored = registry.tool_scores_in_server(server_idx, &query);
    scored.sort_by(|a, b| by_score_then_id((a.1, &tools[a.0].tool_id), (b.1, &tools[b.0].tool_id)));
    Ok(scored
        .into_iter()
        .take(m)
        .enumerate()
        .map(|(i, (idx, score))| RankedCandidate {
            tool_id: tools[idx].tool_id.clone(),
            server_id: server_id.to_string(),
            semantic_score: score,
            rank: i + 1,
        })
        .collect())
}

/// Union of the top-`m` tools of each top-`k` server, re-ranked globally by
/// their within-server score (ties by tool id). At most `k * m` entries.
pub fn candidate_set(
    refined_text: &str,
    raw_query: &str,
    registry: &Registry,
    topic: Option<&str>,
    params: MatchParams,
) -> Result<Vec<RankedCandidate>, RetrievalError> {
    if params.m == 0 {
        return Err(RetrievalError::ZeroLimit { name: "m" });
    }
    let tool_query = if params.tool_stage_uses_refined {
        refined_text
    } else {
        raw_query
    };
    let mut out = Vec::new();
    for server in top_k_servers(refined_text, registry, topic, params.k)? {
        out.extend(top_m_tools(tool_query, &server.server_id, params.m, registry)?);
    }
    rerank(&mut out);
    Ok(out)
}

/// Every tool in the registry, ranked by BM25 of `query_text` against all
/// tool descriptions at once.
pub fn rank_all_tools(query_text: &str, registry: &Registry) -> Vec<RankedCandidate> {
    let query = tokenize(query_text);
    let mut out: Vec<RankedCandidate> = registry
        .tools()
        .iter()
        .zip(registry.global_tool_scores(&query))
        .map(|(t, score)| RankedCandidate {
            tool_id: t.tool_id.clone(),
            server_id: t.server_id.clone(),
            semantic_score: score,
            rank: 0,
        })
        .collect();
    rerank(&mut out);
    out
}

fn rerank(candidates: &mut [RankedCandidate]) {
    candidates.sort_by(|a, b| by_score_then_id((a.semantic_score, &a.tool_id), (b.semantic_score, &b.tool_id)));
    for (i, c) in candidates.iter_mut().enumerate() {
        c.rank = i + 1;
    }
}
