use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{tokenize, Bm25, CorpusScorer, RetrievalError, Similarity};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolDescriptor {
    pub tool_id: String,
    pub server_id: String,
    pub name: String,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ServerDescriptor {
    pub server_id: String,
    pub topic: String,
    pub description: String,
    pub tool_ids: Vec<String>,
    pub is_real: bool,
    pub pattern_id: String,
}

/// Lists every referential-integrity problem between servers and tools, each
/// prefixed with the JSON path of the offending field.
pub fn registry_violations(servers: &[ServerDescriptor], tools: &[ToolDescriptor]) -> Vec<String> {
    let mut out = Vec::new();
    let mut server_ids = BTreeSet::new();
    for (i, s) in servers.iter().enumerate() {
        if !server_ids.insert(s.server_id.as_str()) {
            out.push(format!("servers[{i}].server_id: duplicate server id '{}'", s.server_id));
        }
        if s.tool_ids.is_empty() {
            out.push(format!(
                "servers[{i}].tool_ids: server '{}' lists no tools",
                s.server_id
            ));
        }
    }
    let mut tool_ids = BTreeMap::new();
    for (i, t) in tools.iter().enumerate() {
        if tool_ids.insert(t.tool_id.as_str(), t.server_id.as_str()).is_some() {
            out.push(format!("tools[{i}].tool_id: duplicate tool id '{}'", t.tool_id));
        }
        if t.description.trim().is_empty() {
            out.push(format!(
                "tools[{i}].description: tool '{}' has an empty description",
                t.tool_id
            ));
        }
        if !server_ids.contains(t.server_id.as_str()) {
            out.push(format!(
                "tools[{i}].server_id: tool '{}' references missing server '{}'",
                t.tool_id, t.server_id
            ));
        }
    }
    for (i, s) in servers.iter().enumerate() {
        for (j, tid) in s.tool_ids.iter().enumerate() {
            match tool_ids.get(tid.as_str()) {
                None => out.push(format!(
                    "servers[{i}].tool_ids[{j}]: server '{}' lists missing tool '{tid}'",
                    s.server_id
                )),
                Some(owner) if *owner != s.server_id => out.push(format!(
                    "servers[{i}].tool_ids[{j}]: tool '{tid}' belongs to server '{owner}', not '{}'",
                    s.server_id
                )),
                Some(_) => {}
            }
        }
    }
    out
}

struct ScopedIndex {
    servers: Vec<usize>,
    scorer: Box<dyn CorpusScorer>,
}

struct Indices {
    all_servers: ScopedIndex,
    by_topic: BTreeMap<String, ScopedIndex>,
    /// Per server: positions into `tools` plus a scorer over their descriptions.
    server_tools: Vec<(Vec<usize>, Box<dyn CorpusScorer>)>,
    all_tools: Box<dyn CorpusScorer>,
}

/// Immutable routable universe with precomputed similarity indices.
#[derive(Clone)]
pub struct Registry {
    servers: Arc<Vec<ServerDescriptor>>,
    tools: Arc<Vec<ToolDescriptor>>,
    server_pos: Arc<BTreeMap<String, usize>>,
    tool_pos: Arc<BTreeMap<String, usize>>,
    indices: Arc<Indices>,
}

impl std::fmt::Debug for Registry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Registry")
            .field("servers", &self.servers.len())
            .field("tools", &self.tools.len())
            .finish()
    }
}

impl Registry {
    pub fn new(servers: Vec<ServerDescriptor>, tools: Vec<ToolDescriptor>) -> Result<Self, RetrievalError> {
        Self::with_similarity(servers, tools, &Bm25::default())
    }

    pub fn with_similarity(
        servers: Vec<ServerDescriptor>,
        tools: Vec<ToolDescriptor>,
        similarity: &dyn Similarity,
    ) -> Result<Self, RetrievalError> {
        if servers.is_empty() {
            return Err(RetrievalError::EmptyRegistry);
        }
        let violations = registry_violations(&servers, &tools);
        if !violations.is_empty() {
            return Err(RetrievalError::Invalid(violations));
        }
        let server_pos: BTreeMap<String, usize> = servers
            .iter()
            .enumerate()
            .map(|(i, s)| (s.server_id.clone(), i))
            .collect();
        let tool_pos: BTreeMap<String, usize> = tools.iter().enumerate().map(|(i, t)| (t.tool_id.clone(), i)).collect();

        let server_docs: Vec<Vec<String>> = servers.iter().map(|s| tokenize(&s.description)).collect();
        let scoped = |members: Vec<usize>| {
            let corpus: Vec<Vec<String>> = members.iter().map(|&i| server_docs[i].clone()).collect();
            ScopedIndex {
                scorer: similarity.build(&corpus),
                servers: members,
            }
        };
        let all_servers = scoped((0..servers.len()).collect());
        let mut topic_members: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (i, s) in servers.iter().enumerate() {
            topic_members.entry(s.topic.clone()).or_default().push(i);
        }
        let by_topic = topic_members
            .into_iter()
            .map(|(topic, members)| (topic, scoped(members)))
            .collect();

        let tool_docs: Vec<Vec<String>> = tools.iter().map(|t| tokenize(&t.description)).collect();
        let server_tools = servers
            .iter()
            .map(|s| {
                let members: Vec<usize> = s.tool_ids.iter().map(|id| tool_pos[id]).collect();
                let corpus: Vec<Vec<String>> = members.iter().map(|&i| tool_docs[i].clone()).collect();
                (members, similarity.build(&corpus))
            })
            .collect();
        let all_tools = similarity.build(&tool_docs);

        Ok(Self {
            servers: Arc::new(servers),
            tools: Arc::new(tools),
            server_pos: Arc::new(server_pos),
            tool_pos: Arc::new(tool_pos),
            indices: Arc::new(Indices {
                all_servers,
                by_topic,
                server_tools,
                all_tools,
            }),
        })
    }

    pub fn servers(&self) -> &[ServerDescriptor] {
        &self.servers
    }

    pub fn tools(&self) -> &[ToolDescriptor] {
        &self.tools
    }

    pub fn server(&self, server_id: &str) -> Option<&ServerDescriptor> {
        self.server_pos.get(server_id).map(|&i| &self.servers[i])
    }

    pub fn tool(&self, tool_id: &str) -> Option<&ToolDescriptor> {
        self.tool_pos.get(tool_id).map(|&i| &self.tools[i])
    }

    pub fn server_index(&self, server_id: &str) -> Option<usize> {
        self.server_pos.get(server_id).copied()
    }

    pub fn tool_index(&self, tool_id: &str) -> Option<usize> {
        self.tool_pos.get(tool_id).copied()
    }

    /// Topic of the server hosting `tool_id`.
    pub fn tool_topic(&self, tool_id: &str) -> Option<&str> {
        let tool = self.tool(tool_id)?;
        self.server(&tool.server_id).map(|s| s.topic.as_str())
    }

    /// Topic names in sorted order.
    pub fn topics(&self) -> Vec<&str> {
        self.indices.by_topic.keys().map(String::as_str).collect()
    }

    pub fn tools_for_topic(&self, topic: &str) -> Vec<&ToolDescriptor> {
        self.servers
            .iter()
            .filter(|s| s.topic == topic)
            .flat_map(|s| s.tool_ids.iter().map(|id| &self.tools[self.tool_pos[id]]))
            .collect()
    }

    /// Scores every server (or every server of one topic) against `query`.
    pub(crate) fn server_scores(
        &self,
        topic: Option<&str>,
        query: &[String],
    ) -> Result<Vec<(usize, f64)>, RetrievalError> {
        let scoped = match topic {
            None => &self.indices.all_servers,
            Some(t) => self
                .indices
                .by_topic
                .get(t)
                .ok_or_else(|| RetrievalError::UnknownTopic(t.to_string()))?,
        };
        let scores = scoped.scorer.scores(query);
        Ok(scoped.servers.iter().copied().zip(scores).collect())
    }

    pub(crate) fn tool_scores_in_server(&self, server_idx: usize, query: &[String]) -> Vec<(usize, f64)> {
        let (members, scorer) = &self.indices.server_tools[server_idx];
        members.iter().copied().zip(scorer.scores(query)).collect()
    }

    pub(crate) fn global_tool_scores(&self, query: &[String]) -> Vec<f64> {
        self.indices.all_tools.scores(query)
    }
}
