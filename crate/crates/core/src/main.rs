use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qoe_route::harness::{
    aggregate, build_scenario_dataset, category_summary, decision_mode, default_scenario, emit_csv, mock_llm,
    read_aggregates, read_episodes, read_moving_average, read_traces, run_experiment, CategorySummary, HarnessError,
    NetworkKind, ProfileInit, Scenario, ScenarioTraces, AGGREGATES_CSV, EPISODES_CSV, MOVING_AVERAGE_CSV, TRACES_CSV,
};
use qoe_route::llm::{Backend, HttpConfig, HttpLlm, LlmError, TextGenerator};
use qoe_route::routing::PolicyKind;
use qoe_route::trip::{export_dataset, import_dataset, Dataset, LlmRewriter, TemplateRewriter};

#[derive(Parser)]
#[command(name = "qoe-route", version, about = "QoE-aware tool routing simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Mock,
    Http,
}

#[derive(Clone, Copy, ValueEnum)]
enum NetworkArg {
    Random,
    Smooth,
}

#[derive(Clone, Copy, ValueEnum)]
enum InitArg {
    Category,
    Mismatched,
    Neutral,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the benchmark dataset (profiles and queries) for a scenario.
    Gen {
        /// Scenario file, or `random` / `smooth` for a built-in scenario.
        #[arg(long, default_value = "random")]
        scenario: String,
        #[arg(long)]
        out: PathBuf,
        /// Override the dataset seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        users: Option<usize>,
        #[arg(long)]
        queries: Option<usize>,
        /// `http` phrases queries with a live model instead of templates.
        #[arg(long, value_enum)]
        backend: Option<BackendArg>,
    },
    /// Run every (seed, policy, user) episode and write the CSV results.
    Run {
        /// Scenario file(s), or `random` / `smooth`; repeat to run several.
        #[arg(long, required = true)]
        scenario: Vec<String>,
        #[arg(long)]
        out: PathBuf,
        /// Replace the scenario's seed list; repeatable.
        #[arg(long)]
        seed: Vec<u64>,
        /// Replace the scenario's policy list; repeatable.
        #[arg(long)]
        policy: Vec<String>,
        #[arg(long, value_enum)]
        backend: Option<BackendArg>,
        #[arg(long)]
        no_profile_update: bool,
        #[arg(long, value_enum)]
        profile_init: Option<InitArg>,
        /// Use a dataset written by `gen` instead of generating one.
        #[arg(long)]
        dataset: Option<PathBuf>,
        /// Run seeds one after another instead of in parallel.
        #[arg(long)]
        sequential: bool,
    },
    /// Check result CSVs against their schemas and summarise them.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a built-in scenario file.
    Scenario {
        #[arg(long, value_enum)]
        network: NetworkArg,
        #[arg(long)]
        out: PathBuf,
    },
}

fn load(spec: &str) -> Result<Scenario, HarnessError> {
    let path = Path::new(spec);
    if !path.exists() {
        match spec {
            "random" => return Scenario::new(default_scenario(NetworkKind::Random)),
            "smooth" => return Scenario::new(default_scenario(NetworkKind::Smooth)),
            _ => {}
        }
    }
    Scenario::load(path)
}

fn backend_of(arg: BackendArg) -> Backend {
    match arg {
        BackendArg::Mock => Backend::Mock,
        BackendArg::Http => Backend::Http,
    }
}

enum Failure {
    Input(String),
    Runtime(String),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        if e.exit_code() == 1 {
            Failure::Input(e.to_string())
        } else {
            Failure::Runtime(e.to_string())
        }
    }
}

impl From<LlmError> for Failure {
    fn from(e: LlmError) -> Self {
        match e {
            LlmError::Config(_) | LlmError::InvalidRequest(_) => Failure::Input(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

fn http_llm() -> Result<HttpLlm, Failure> {
    Ok(HttpLlm::new(HttpConfig::from_env()?)?)
}

fn gen(
    scenario: &str,
    out: &Path,
    seed: Option<u64>,
    users: Option<usize>,
    queries: Option<usize>,
    backend: Option<BackendArg>,
) -> Result<(), Failure> {
    let mut cfg = load(scenario)?.config;
    if let Some(s) = seed {
        cfg.dataset.seed = s;
    }
    if let Some(u) = users {
        cfg.dataset.num_users = u;
    }
    if let Some(q) = queries {
        cfg.dataset.queries_per_user = q;
        cfg.horizon = cfg.horizon.max(q);
    }
    let scenario = Scenario::new(cfg)?;
    let dataset = match backend.map(backend_of).unwrap_or(Backend::Mock) {
        Backend::Mock => build_scenario_dataset(&scenario, &TemplateRewriter)?,
        Backend::Http => {
            let llm = http_llm()?;
            build_scenario_dataset(&scenario, &LlmRewriter::new(&llm))?
        }
    };
    export_dataset(&dataset, out).map_err(|e| Failure::Runtime(e.to_string()))?;
    println!(
        "wrote {} profiles and {} queries to {}",
        dataset.profiles.len(),
        dataset.queries.len(),
        out.display()
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run(
    scenarios: &[String],
    out: &Path,
    seeds: &[u64],
    policies: &[String],
    backend: Option<BackendArg>,
    no_profile_update: bool,
    profile_init: Option<InitArg>,
    dataset_path: Option<&Path>,
    sequential: bool,
) -> Result<(), Failure> {
    let policies: Vec<PolicyKind> = policies
        .iter()
        .map(|p| p.parse::<PolicyKind>().map_err(|e| Failure::Input(e.to_string())))
        .collect::<Result<_, _>>()?;
    let mut results = Vec::new();
    let mut traces = Vec::new();
    for spec in scenarios {
        let mut cfg = load(spec)?.config;
        if !seeds.is_empty() {
            cfg.seeds = seeds.to_vec();
        }
        if !policies.is_empty() {
            cfg.policies = policies.clone();
        }
        if let Some(b) = backend {
            cfg.backend = backend_of(b);
        }
        if no_profile_update {
            cfg.profile.update = false;
        }
        if let Some(init) = profile_init {
            cfg.profile.init = match init {
                InitArg::Category => ProfileInit::Category,
                InitArg::Mismatched => ProfileInit::Mismatched,
                InitArg::Neutral => ProfileInit::Neutral,
            };
        }
        let scenario = Scenario::new(cfg)?;
        let mock;
        let http;
        let llm: &dyn TextGenerator = match scenario.config.backend {
            Backend::Mock => {
                mock = mock_llm(&scenario);
                &mock
            }
            Backend::Http => {
                http = http_llm()?;
                &http
            }
        };
        let dataset: Dataset = match dataset_path {
            Some(p) => import_dataset(p, Some(&scenario.registry)).map_err(|e| Failure::from(HarnessError::from(e)))?,
            None => build_scenario_dataset(&scenario, &TemplateRewriter)?,
        };
        let mode = decision_mode(scenario.config.backend);
        let output = run_experiment(&scenario, &dataset, llm, mode, !sequential)?;
        results.extend(output.results);
        traces.push((scenario.config.name.clone(), output.traces));
    }
    let metrics = aggregate(&results);
    let trace_refs: Vec<ScenarioTraces<'_>> = traces
        .iter()
        .map(|(name, t)| ScenarioTraces {
            scenario: name,
            traces: t,
        })
        .collect();
    let files = emit_csv(&metrics, &results, &trace_refs, out)?;
    print_summary(&category_summary(&results));
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn print_summary(rows: &[CategorySummary]) {
    println!(
        "{:<10} {:<15} {:<13} {:>9} {:>9} {:>10}",
        "scenario", "category", "policy", "mean_qoe", "accuracy", "latency_s"
    );
    for r in rows {
        println!(
            "{:<10} {:<15} {:<13} {:>9.4} {:>9.4} {:>10.4}",
            r.scenario,
            r.category.as_str(),
            r.policy_name,
            r.mean_qoe,
            r.accuracy,
            r.mean_latency_s
        );
    }
}

fn report(input: &Path, out: &Path) -> Result<(), Failure> {
    let episodes = read_episodes(&input.join(EPISODES_CSV))?;
    let aggregates = read_aggregates(&input.join(AGGREGATES_CSV))?;
    let ma = read_moving_average(&input.join(MOVING_AVERAGE_CSV))?;
    let traces = read_traces(&input.join(TRACES_CSV))?;
    let recomputed = aggregate(&episodes);
    let consistent = recomputed.per_user.len() == aggregates.len()
        && recomputed.per_user.iter().zip(&aggregates).all(|(a, b)| {
            a.user_id == b.user_id
                && a.policy_name == b.policy_name
                && (a.mean_qoe - b.mean_qoe).abs() < 1e-9
                && (a.accuracy - b.accuracy).abs() < 1e-9
                && (a.mean_latency_s - b.mean_latency_s).abs() < 1e-9
        });
    if !consistent {
        return Err(Failure::Input(format!(
            "{} does not match the aggregates recomputed from {}",
            AGGREGATES_CSV, EPISODES_CSV
        )));
    }
    let summary = category_summary(&episodes);
    std::fs::create_dir_all(out).map_err(|e| Failure::Runtime(format!("{}: {e}", out.display())))?;
    let path = out.join("summary.csv");
    let mut w = csv::Writer::from_path(&path).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
    let io = |e: csv::Error| Failure::Runtime(format!("{}: {e}", path.display()));
    w.write_record([
        "scenario",
        "category",
        "policy_name",
        "mean_qoe",
        "accuracy",
        "mean_latency_s",
        "rows",
    ])
    .map_err(io)?;
    for r in &summary {
        w.write_record([
            r.scenario.clone(),
            r.category.as_str().to_string(),
            r.policy_name.clone(),
            r.mean_qoe.to_string(),
            r.accuracy.to_string(),
            r.mean_latency_s.to_string(),
            r.rows.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush()
        .map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
    print_summary(&summary);
    println!(
        "{} episode rows, {} moving-average points, {} trace rows; wrote {}",
        episodes.len(),
        ma.len(),
        traces.len(),
        path.display()
    );
    Ok(())
}

fn write_scenario(network: NetworkArg, out: &Path) -> Result<(), Failure> {
    let kind = match network {
        NetworkArg::Random => NetworkKind::Random,
        NetworkArg::Smooth => NetworkKind::Smooth,
    };
    default_scenario(kind).save(out)?;
    println!("wrote {}", out.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Usage errors are bad input; help and version are not errors.
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Gen {
            scenario,
            out,
            seed,
            users,
            queries,
            backend,
        } => gen(&scenario, &out, seed, users, queries, backend),
        Command::Run {
            scenario,
            out,
            seed,
            policy,
            backend,
            no_profile_update,
            profile_init,
            dataset,
            sequential,
        } => run(
            &scenario,
            &out,
            &seed,
            &policy,
            backend,
            no_profile_update,
            profile_init,
            dataset.as_deref(),
            sequential,
        ),
        Command::Report { input, out } => report(&input, &out),
        Command::Scenario { network, out } => write_scenario(network, &out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
