//! Scenario loading, episode orchestration, aggregation and CSV output.

mod catalog;
mod episode;
mod metrics;
mod output;
mod scenario;

use std::path::Path;

use thiserror::Error;

pub use episode::{
    run_episode, run_experiment, EpisodeResult, ExperimentOutput, PolicyRouter, Router, SeedWorld, StepInput,
};
pub use metrics::{
    aggregate, category_summary, moving_average, AggregateMetrics, CategorySummary, MovingAveragePoint, UserAggregate,
    MA_WINDOW,
};
pub use output::{
    emit_csv, read_aggregates, read_csv, read_episodes, read_moving_average, read_traces, trace_rows, ScenarioTraces,
    TraceRow, AGGREGATES_CSV, AGGREGATE_COLUMNS, EPISODES_CSV, EPISODE_COLUMNS, MOVING_AVERAGE_COLUMNS,
    MOVING_AVERAGE_CSV, TRACES_CSV, TRACE_COLUMNS,
};
pub use scenario::{
    default_scenario, load_scenario, NetworkKind, PredictorConfig, ProfileConfig, ProfileInit, Scenario,
    ScenarioConfig, TopicConfig,
};

use crate::lexicon::Lexicon;
use crate::llm::{Backend, MockLlm, TextGenerator};
use crate::netsim::NetsimError;
use crate::qoe::QoeError;
use crate::retrieval::RetrievalError;
use crate::routing::{DecisionMode, RoutingError};
use crate::trip::{build_dataset, Dataset, Rewriter, TemplateRewriter, TripError};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: parse error: {message}")]
    Parse { path: String, message: String },
    #[error("validation failed:\n  {}", .0.join("\n  "))]
    Validation(Vec<String>),
    #[error("{path}: {message}")]
    Csv { path: String, message: String },
    #[error("{path}: schema mismatch: {message}")]
    Schema { path: String, message: String },
    #[error("user {0} has no queries")]
    EmptyQueries(String),
    #[error("query {query_id}: {source}")]
    Query {
        query_id: String,
        #[source]
        source: Box<HarnessError>,
    },
    #[error(transparent)]
    Retrieval(#[from] RetrievalError),
    #[error(transparent)]
    Netsim(#[from] NetsimError),
    #[error(transparent)]
    Qoe(#[from] QoeError),
    #[error(transparent)]
    Routing(#[from] RoutingError),
    #[error(transparent)]
    Trip(#[from] TripError),
}

impl HarnessError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub(crate) fn csv(path: &Path, err: csv::Error) -> Self {
        HarnessError::Csv {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }

    /// 1 for bad input (parse, validation, schema), 2 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Parse { .. }
            | HarnessError::Validation(_)
            | HarnessError::Schema { .. }
            | HarnessError::Retrieval(RetrievalError::Invalid(_))
            | HarnessError::Trip(TripError::InvalidDataset(_)) => 1,
            HarnessError::Query { source, .. } => source.exit_code().max(2),
            _ => 2,
        }
    }
}

pub fn decision_mode(backend: Backend) -> DecisionMode {
    match backend {
        Backend::Mock => DecisionMode::Mock,
        Backend::Http => DecisionMode::Live,
    }
}

/// Offline backend configured with the scenario's vocabulary.
pub fn mock_llm(scenario: &Scenario) -> MockLlm {
    MockLlm::new(Lexicon::from_registry(&scenario.registry)).with_profile_delta(scenario.config.profile.delta)
}

/// The scenario's benchmark, phrased by `rewriter`.
pub fn build_scenario_dataset(scenario: &Scenario, rewriter: &dyn Rewriter) -> Result<Dataset, HarnessError> {
    Ok(build_dataset(
        &scenario.config.dataset,
        &scenario.config.topic_names(),
        &scenario.registry,
        rewriter,
    )?)
}

/// Everything one scenario run produces.
#[derive(Debug, Clone)]
pub struct ScenarioRun {
    pub dataset: Dataset,
    pub output: ExperimentOutput,
}

/// Builds the template dataset and runs every (seed, policy, user) episode
/// with the mock backend.
pub fn run_mock(scenario: &Scenario, parallel: bool) -> Result<ScenarioRun, HarnessError> {
    let dataset = build_scenario_dataset(scenario, &TemplateRewriter)?;
    let llm = mock_llm(scenario);
    let output = run_experiment(
        scenario,
        &dataset,
        &llm as &dyn TextGenerator,
        DecisionMode::Mock,
        parallel,
    )?;
    Ok(ScenarioRun { dataset, output })
}
