//! Synthetic network: per-server latency traces, invocation outcomes with
//! latency-coupled failures, and the EWMA latency predictor.

mod ewma;
mod pattern;

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qoe::Outcome;
use crate::rng::{domain, substream};

pub use ewma::{EwmaParams, EwmaState};
pub use pattern::{sample_latency, LatencyPattern, PatternKind, LATENCY_FLOOR_S, NOISE_CLIP_SIGMAS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetsimError {
    #[error("invalid latency pattern: {0}")]
    InvalidPattern(String),
    #[error("time index {time_index} outside horizon {horizon}")]
    TimeOutOfRange { time_index: usize, horizon: usize },
    #[error("latency samples must be positive, got {0}")]
    NonPositiveSample(f64),
    #[error("no latency samples observed yet")]
    ColdStart,
    #[error("invalid EWMA parameters: {0}")]
    InvalidEwma(String),
    #[error("tool '{0}' is not bound to a server pattern")]
    UnboundTool(String),
    #[error("invalid failure model: {0}")]
    InvalidFailureModel(String),
}

/// Network latency of every server at every step of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkTrace {
    server_ids: Vec<String>,
    patterns: Vec<LatencyPattern>,
    /// `latencies[server][t]`
    latencies: Vec<Vec<f64>>,
}

impl NetworkTrace {
    /// Samples `horizon` steps for each `(server_id, pattern)`. Server `i`
    /// draws from its own sub-stream of `seed`, so traces do not depend on
    /// server order or count.
    pub fn generate(servers: &[(String, LatencyPattern)], horizon: usize, seed: u64) -> Result<Self, NetsimError> {
        let mut latencies = Vec::with_capacity(servers.len());
        for (server_id, pattern) in servers {
            let mut rng = substream(seed, &[domain::TRACE, crate::rng::str_key(server_id)]);
            let series = (0..horizon)
                .map(|t| sample_latency(pattern, t, horizon, &mut rng))
                .collect::<Result<Vec<_>, _>>()?;
            latencies.push(series);
        }
        Ok(Self {
            server_ids: servers.iter().map(|(id, _)| id.clone()).collect(),
            patterns: servers.iter().map(|(_, p)| p.clone()).collect(),
            latencies,
        })
    }

    pub fn horizon(&self) -> usize {
        self.latencies.first().map_or(0, Vec::len)
    }

    pub fn server_ids(&self) -> &[String] {
        &self.server_ids
    }

    pub fn pattern(&self, server: usize) -> &LatencyPattern {
        &self.patterns[server]
    }

    pub fn latency(&self, server: usize, time_index: usize) -> f64 {
        self.latencies[server][time_index]
    }

    pub fn series(&self, server: usize) -> &[f64] {
        &self.latencies[server]
    }

    /// Snapshot of every server at `time_index`.
    pub fn state_at(&self, time_index: usize) -> Result<NetworkState, NetsimError> {
        let horizon = self.horizon();
        if time_index >= horizon {
            return Err(NetsimError::TimeOutOfRange { time_index, horizon });
        }
        Ok(NetworkState {
            time_index,
            latency: self.latencies.iter().map(|s| s[time_index]).collect(),
            stability: self.patterns.iter().map(|p| p.stability).collect(),
        })
    }
}

/// Instantaneous network condition, indexed by server position.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkState {
    pub time_index: usize,
    pub latency: Vec<f64>,
    pub stability: Vec<f64>,
}

/// How latency turns into failures, and how long tools take to execute.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureModel {
    /// Hard execution timeout; `None` disables it.
    pub timeout_s: Option<f64>,
    /// Link-drop time constant in `exp(-L / tau)`; `None` means no decay.
    pub tau_net_s: Option<f64>,
    /// Median tool execution time.
    pub exec_median_s: f64,
    /// Log-space standard deviation of the execution time.
    pub exec_sigma: f64,
    /// Per-tool median overrides.
    #[serde(default)]
    pub exec_median_overrides: BTreeMap<String, f64>,
}

impl Default for FailureModel {
    fn default() -> Self {
        Self {
            timeout_s: Some(30.0),
            tau_net_s: Some(60.0),
            exec_median_s: 0.2,
            exec_sigma: 0.25,
            exec_median_overrides: BTreeMap::new(),
        }
    }
}

impl FailureModel {
    /// Negated comparisons also reject NaN.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn violations(&self, path: &str) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(t) = self.timeout_s {
            if !(t > 0.0) {
                out.push(format!("{path}.timeout_s: must be > 0"));
            }
        }
        if let Some(t) = self.tau_net_s {
            if !(t > 0.0) {
                out.push(format!("{path}.tau_net_s: must be > 0"));
            }
        }
        if !(self.exec_median_s > 0.0) {
            out.push(format!("{path}.exec_median_s: must be > 0"));
        }
        if !(self.exec_sigma >= 0.0) {
            out.push(format!("{path}.exec_sigma: must be >= 0"));
        }
        for (tool, m) in &self.exec_median_overrides {
            if !(*m > 0.0) {
                out.push(format!("{path}.exec_median_overrides.{tool}: must be > 0"));
            }
        }
        out
    }

    pub fn exec_median(&self, tool_id: &str) -> f64 {
        self.exec_median_overrides
            .get(tool_id)
            .copied()
            .unwrap_or(self.exec_median_s)
    }

    /// 1 within the timeout, 0 beyond it.
    pub fn p_tool(&self, latency: f64) -> f64 {
        match self.timeout_s {
            Some(t) if latency > t => 0.0,
            _ => 1.0,
        }
    }

    /// `exp(-L / tau) * stability`.
    pub fn p_net(&self, latency: f64, stability: f64) -> f64 {
        let decay = self.tau_net_s.map_or(1.0, |tau| (-latency / tau).exp());
        decay * stability
    }

    /// Lognormal execution time driven by a standard normal draw `z`.
    pub fn exec_time(&self, tool_id: &str, z: f64) -> f64 {
        self.exec_median(tool_id) * (self.exec_sigma * z).exp()
    }
}

/// Tool → hosting server position in the trace.
pub type ToolBindings = BTreeMap<String, usize>;

/// Invokes `tool_id` against the network at `state`. The outcome's success
/// flag covers execution and link stability only; routing correctness is
/// the caller's to combine. Draws one normal then one uniform from `rng`.
pub fn invoke<R: Rng + ?Sized>(
    tool_id: &str,
    state: &NetworkState,
    bindings: &ToolBindings,
    failure: &FailureModel,
    rng: &mut R,
) -> Result<Outcome, NetsimError> {
    let &server = bindings
        .get(tool_id)
        .ok_or_else(|| NetsimError::UnboundTool(tool_id.to_string()))?;
    let t_net = *state
        .latency
        .get(server)
        .ok_or_else(|| NetsimError::UnboundTool(tool_id.to_string()))?;
    let z: f64 = rng.sample(StandardNormal);
    let u: f64 = rng.random();
    let t_tool = failure.exec_time(tool_id, z);
    let latency = t_net + t_tool;
    let p = failure.p_tool(latency) * failure.p_net(latency, state.stability[server]);
    Outcome::new(u < p, t_net, t_tool).map_err(|e| NetsimError::InvalidFailureModel(e.to_string()))
}

/// One EWMA predictor per tool.
#[derive(Debug, Clone)]
pub struct LatencyPredictor {
    states: BTreeMap<String, EwmaState>,
    params: EwmaParams,
}

impl LatencyPredictor {
    pub fn new(params: EwmaParams) -> Result<Self, NetsimError> {
        EwmaState::new(params)?;
        Ok(Self {
            states: BTreeMap::new(),
            params,
        })
    }

    pub fn observe(&mut self, tool_id: &str, latency: f64) -> Result<(), NetsimError> {
        if !self.states.contains_key(tool_id) {
            self.states.insert(tool_id.to_string(), EwmaState::new(self.params)?);
        }
        self.states.get_mut(tool_id).expect("inserted above").observe(latency)
    }

    pub fn predict_or(&self, tool_id: &str, cold_start: f64) -> f64 {
        self.states
            .get(tool_id)
            .map_or(cold_start, |s| s.predict_or(cold_start))
    }

    pub fn state(&self, tool_id: &str) -> Option<&EwmaState> {
        self.states.get(tool_id)
    }
}
