use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::scenario::Scenario;
use super::HarnessError;
use crate::llm::TextGenerator;
use crate::netsim::{invoke, LatencyPredictor, NetworkTrace, ToolBindings};
use crate::qoe::{conditional_qoe, QoeParams};
use crate::retrieval::{MatchParams, Registry};
use crate::rng::{domain, str_key, substream};
use crate::routing::{
    dir_rout, jaunt_decide, jaunt_greedy, pre_rout, refine_query, update_profile, AgentProfileView, DecisionMode,
    PolicyKind, RoutingContext, RoutingDecision, RoutingError, UpdateOutcome,
};
use crate::trip::{Category, Dataset, QueryRecord, UserProfile};

/// One routed query. Field order is the `episodes.csv` column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeResult {
    pub scenario: String,
    pub seed: u64,
    pub policy_name: String,
    pub user_id: String,
    pub category: Category,
    pub query_id: String,
    pub timestamp_index: usize,
    pub selected_tool: String,
    pub ground_truth_tool: String,
    pub success: bool,
    pub t_net_s: f64,
    pub t_tool_s: f64,
    pub latency_s: f64,
    pub qoe: f64,
}

/// What a router may see for one query. The user's true weights and the
/// ground-truth tool are deliberately absent.
pub struct StepInput<'a> {
    pub query_id: &'a str,
    pub raw_query: &'a str,
    pub time_index: usize,
    pub profile: &'a AgentProfileView,
    pub l_th: f64,
    pub predict_latency: &'a dyn Fn(&str) -> f64,
}

pub trait Router: Sync {
    fn name(&self) -> String;

    fn decide(&self, step: &StepInput<'_>) -> Result<RoutingDecision, RoutingError>;
}

/// Dispatches to one of the four built-in policies.
pub struct PolicyRouter<'a> {
    pub kind: PolicyKind,
    pub registry: &'a Registry,
    pub llm: &'a dyn TextGenerator,
    pub mode: DecisionMode,
    pub params: MatchParams,
}

impl Router for PolicyRouter<'_> {
    fn name(&self) -> String {
        self.kind.label().to_string()
    }

    fn decide(&self, step: &StepInput<'_>) -> Result<RoutingDecision, RoutingError> {
        match self.kind {
            PolicyKind::DirRout => dir_rout(step.raw_query, self.registry),
            PolicyKind::PreRout => pre_rout(step.raw_query, self.registry, self.llm, self.params),
            PolicyKind::JauntGreedy | PolicyKind::Jaunt => {
                let refined = refine_query(step.raw_query, self.llm);
                let ctx = RoutingContext::build(
                    step.raw_query,
                    &refined,
                    self.registry,
                    self.params,
                    step.predict_latency,
                    step.profile.clone(),
                    step.l_th,
                )?;
                if self.kind == PolicyKind::JauntGreedy {
                    jaunt_greedy(&ctx)
                } else {
                    jaunt_decide(&ctx, self.llm, self.mode)
                }
            }
        }
    }
}

/// Network trace of one seed plus the per-step probe latency of every tool.
pub struct SeedWorld {
    pub seed: u64,
    pub trace: NetworkTrace,
    bindings: ToolBindings,
    /// `probes[tool][t]`, in registry tool order.
    probes: Vec<Vec<f64>>,
}

impl SeedWorld {
    pub fn new(scenario: &Scenario, seed: u64) -> Result<Self, HarnessError> {
        let cfg = &scenario.config;
        let trace = NetworkTrace::generate(&scenario.server_patterns(), cfg.horizon, seed)?;
        let bindings: ToolBindings = scenario
            .registry
            .tools()
            .iter()
            .map(|t| {
                (
                    t.tool_id.clone(),
                    scenario.registry.server_index(&t.server_id).expect("validated"),
                )
            })
            .collect();
        let probes = scenario
            .registry
            .tools()
            .iter()
            .map(|tool| {
                let server = bindings[&tool.tool_id];
                let mut rng = substream(seed, &[domain::PROBE, str_key(&tool.tool_id)]);
                (0..cfg.horizon)
                    .map(|t| {
                        let z: f64 = StandardNormal.sample(&mut rng);
                        trace.latency(server, t) + cfg.failure.exec_time(&tool.tool_id, z)
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            seed,
            trace,
            bindings,
            probes,
        })
    }
}

fn initial_view(scenario: &Scenario, profile: &UserProfile) -> AgentProfileView {
    let (w1, w2) = scenario.config.profile.init.weights(profile.category);
    AgentProfileView::new(&profile.user_id, w1, w2)
}

/// Runs one user's queries in order under one router.
///
/// Step `t` handles the user's `t`-th query against the network at time
/// `t`: decide, invoke, score with the true weights, feed the realised
/// latency to the predictor, optionally update the profile estimate, then
/// record this step's probes.
pub fn run_episode(
    scenario: &Scenario,
    world: &SeedWorld,
    router: &dyn Router,
    profile: &UserProfile,
    queries: &[&QueryRecord],
    llm: &dyn TextGenerator,
    mode: DecisionMode,
) -> Result<Vec<EpisodeResult>, HarnessError> {
    if queries.is_empty() {
        return Err(HarnessError::EmptyQueries(profile.user_id.clone()));
    }
    let cfg = &scenario.config;
    let registry = &scenario.registry;
    let mut predictor = LatencyPredictor::new(cfg.predictor.ewma())?;
    let mut view = initial_view(scenario, profile);
    let mut out = Vec::with_capacity(queries.len());
    for (t, query) in queries.iter().enumerate() {
        let fail = |source: HarnessError| HarnessError::Query {
            query_id: query.query_id.clone(),
            source: Box::new(source),
        };
        let topic = scenario.config.topic(&query.topic).ok_or_else(|| {
            fail(HarnessError::Validation(vec![format!(
                "query topic '{}' is not in the scenario",
                query.topic
            )]))
        })?;
        let state = world.trace.state_at(t).map_err(|e| fail(e.into()))?;
        let predict = |tool_id: &str| predictor.predict_or(tool_id, scenario.cold_start(tool_id));
        let step = StepInput {
            query_id: &query.query_id,
            raw_query: &query.final_text,
            time_index: t,
            profile: &view,
            l_th: topic.l_th,
            predict_latency: &predict,
        };
        let decision = router.decide(&step).map_err(|e| fail(e.into()))?;
        let mut rng = substream(
            world.seed,
            &[domain::INVOKE, str_key(&profile.user_id), str_key(&query.query_id)],
        );
        let raw = invoke(&decision.selected_tool, &state, &world.bindings, &cfg.failure, &mut rng)
            .map_err(|e| fail(e.into()))?;
        let correct = decision.selected_tool == query.ground_truth_tool;
        let outcome = raw.with_success(raw.success && correct);
        let truth = QoeParams::new(f64::from(profile.w1), f64::from(profile.w2), topic.q_max, topic.l_th)
            .map_err(|e| fail(e.into()))?;
        let qoe = conditional_qoe(&outcome, &truth);
        let latency = outcome.latency();
        predictor
            .observe(&decision.selected_tool, latency)
            .map_err(|e| fail(e.into()))?;
        if cfg.profile.update && (t + 1) % cfg.profile.every_n == 0 {
            view = update_profile(
                &view,
                &query.final_text,
                UpdateOutcome {
                    success: outcome.success,
                    latency_s: latency,
                    qoe,
                },
                llm,
                mode,
                cfg.profile.delta,
            );
        }
        if cfg.predictor.probe_all {
            for (i, tool) in registry.tools().iter().enumerate() {
                predictor
                    .observe(&tool.tool_id, world.probes[i][t])
                    .map_err(|e| fail(e.into()))?;
            }
        }
        out.push(EpisodeResult {
            scenario: cfg.name.clone(),
            seed: world.seed,
            policy_name: router.name(),
            user_id: profile.user_id.clone(),
            category: profile.category,
            query_id: query.query_id.clone(),
            timestamp_index: t,
            selected_tool: decision.selected_tool,
            ground_truth_tool: query.ground_truth_tool.clone(),
            success: outcome.success,
            t_net_s: outcome.t_net(),
            t_tool_s: outcome.t_tool(),
            latency_s: latency,
            qoe,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    /// Ordered by seed (config order), policy (config order), user, query.
    pub results: Vec<EpisodeResult>,
    pub traces: Vec<(u64, NetworkTrace)>,
}

fn run_seed(
    scenario: &Scenario,
    dataset: &Dataset,
    llm: &dyn TextGenerator,
    mode: DecisionMode,
    seed: u64,
) -> Result<(Vec<EpisodeResult>, NetworkTrace), HarnessError> {
    let world = SeedWorld::new(scenario, seed)?;
    let mut results = Vec::new();
    for &kind in &scenario.config.policies {
        let router = PolicyRouter {
            kind,
            registry: &scenario.registry,
            llm,
            mode,
            params: scenario.config.retrieval,
        };
        for profile in &dataset.profiles {
            let queries = dataset.queries_for(&profile.user_id);
            results.extend(run_episode(scenario, &world, &router, profile, &queries, llm, mode)?);
        }
    }
    Ok((results, world.trace))
}

/// Every (seed, policy, user) episode. Seeds run on the rayon pool when
/// `parallel` is set; output order is the same either way.
pub fn run_experiment(
    scenario: &Scenario,
    dataset: &Dataset,
    llm: &dyn TextGenerator,
    mode: DecisionMode,
    parallel: bool,
) -> Result<ExperimentOutput, HarnessError> {
    let problems = dataset.violations(Some(&scenario.registry));
    if !problems.is_empty() {
        return Err(HarnessError::Validation(problems));
    }
    let seeds = &scenario.config.seeds;
    let per_seed: Vec<Result<(Vec<EpisodeResult>, NetworkTrace), HarnessError>> = if parallel {
        seeds
            .par_iter()
            .map(|&s| run_seed(scenario, dataset, llm, mode, s))
            .collect()
    } else {
        seeds
            .iter()
            .map(|&s| run_seed(scenario, dataset, llm, mode, s))
            .collect()
    };
    let mut results = Vec::new();
    let mut traces = Vec::new();
    for (seed, r) in seeds.iter().zip(per_seed) {
        let (rows, trace) = r?;
        results.extend(rows);
        traces.push((*seed, trace));
    }
    Ok(ExperimentOutput { results, traces })
}
