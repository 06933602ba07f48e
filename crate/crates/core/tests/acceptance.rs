//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit when any
//! criterion fails. Run with `cargo test --test acceptance`.

use std::collections::BTreeMap;
use std::fs;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qoe_route::harness::{
    aggregate, category_summary, default_scenario, emit_csv, run_mock, CategorySummary, EpisodeResult, NetworkKind,
    ProfileInit, Scenario, ScenarioConfig, ScenarioRun, ScenarioTraces, EPISODES_CSV,
};
use qoe_route::netsim::{EwmaParams, EwmaState};
use qoe_route::qoe::{conditional_qoe, distortion, Outcome, QoeParams};
use qoe_route::retrieval::{bm25_scores, candidate_set, top_k_servers, MatchParams, RankedCandidate};
use qoe_route::routing::PolicyKind;
use qoe_route::trip::{generate_profiles, Category};

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(failures: Vec<String>, ok_detail: String) -> Self {
        if failures.is_empty() {
            Verdict {
                pass: true,
                detail: ok_detail,
            }
        } else {
            let shown: Vec<&String> = failures.iter().take(8).collect();
            let more = failures.len().saturating_sub(shown.len());
            let mut detail = shown.iter().map(|s| s.as_str()).collect::<Vec<_>>().join("; ");
            if more > 0 {
                detail.push_str(&format!("; and {more} more"));
            }
            Verdict { pass: false, detail }
        }
    }
}

fn check_time(failures: &mut Vec<String>, elapsed: Duration, limit: Duration) {
    if elapsed > limit {
        failures.push(format!("runtime {:.2?} exceeds {:.0?}", elapsed, limit));
    }
}

fn qoe_kernel() -> Verdict {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..1000 {
        let w1 = rng.random_range(0.0..10.0);
        let w2 = rng.random_range(0.0..10.0);
        let l_th = rng.random_range(0.1..10.0);
        let q_max = rng.random_range(0.1..5.0);
        let p = QoeParams::new(w1, w2, q_max, l_th).unwrap();
        let d0 = distortion(0.0, &p).unwrap();
        if d0 != 0.0 {
            failures.push(format!("D(0) = {d0} for w1 {w1}"));
        }
        let dth = distortion(l_th, &p).unwrap();
        if (dth - w1 * std::f64::consts::LN_2).abs() > 1e-12 {
            failures.push(format!("D(l_th) = {dth}, expected {}", w1 * std::f64::consts::LN_2));
        }

        let mut ls = [
            rng.random_range(0.0..30.0),
            rng.random_range(0.0..30.0),
            rng.random_range(0.0..30.0),
        ];
        ls.sort_by(f64::total_cmp);
        let [a, b, c] = ls;
        let (da, db, dc) = (
            distortion(a, &p).unwrap(),
            distortion(b, &p).unwrap(),
            distortion(c, &p).unwrap(),
        );
        if !(da <= db && db <= dc) {
            failures.push(format!("not monotone at {a}, {b}, {c}"));
        }
        if a < b && b < c {
            let left = (db - da) / (b - a);
            let right = (dc - db) / (c - b);
            if left < right - 1e-9 {
                failures.push(format!("not concave at {a}, {b}, {c}"));
            }
        }

        let t_net = rng.random_range(0.0..10.0);
        let t_tool = rng.random_range(0.0..10.0);
        let hit = conditional_qoe(&Outcome::new(true, t_net, t_tool).unwrap(), &p);
        let miss = conditional_qoe(&Outcome::new(false, t_net, t_tool).unwrap(), &p);
        if ((hit - miss) - w2 * q_max).abs() > 1e-12 {
            failures.push(format!("success premium {} != {}", hit - miss, w2 * q_max));
        }
    }
    Verdict::new(failures, "1000 random parameter sets and triples".into())
}

fn ewma() -> Verdict {
    let mut failures = Vec::new();
    let trace = [2.0, 4.0, 1.0, 3.0, 5.0];
    // Predictions after each sample, worked out by hand.
    let expected: [(f64, [f64; 5]); 3] = [
        (0.0, [2.0, 2.0, 2.0, 2.0, 2.0]),
        (0.3, [2.0, 3.02, 1.784, 2.5688, 3.71816]),
        (1.0, [2.0, 4.0, 1.0, 3.0, 5.0]),
    ];
    for (alpha, want) in expected {
        let mut s = EwmaState::new(EwmaParams { alpha, window: 10 }).unwrap();
        for (i, (&x, &w)) in trace.iter().zip(want.iter()).enumerate() {
            s.observe(x).unwrap();
            let got = s.predict().unwrap();
            if (got - w).abs() > 1e-12 {
                failures.push(format!("alpha {alpha} step {}: {got} != {w}", i + 1));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..10_000 {
        let alpha = rng.random_range(0.0..=1.0);
        let window = rng.random_range(1..=12);
        let mut s = EwmaState::new(EwmaParams { alpha, window }).unwrap();
        let len = rng.random_range(1..=30);
        for _ in 0..len {
            s.observe(rng.random_range(0.001..20.0)).unwrap();
            let p = s.predict().unwrap();
            let h = s.historical().unwrap();
            let lo = s.window().fold(h, f64::min);
            let hi = s.window().fold(h, f64::max);
            if p < lo - 1e-12 || p > hi + 1e-12 {
                failures.push(format!("prediction {p} outside [{lo}, {hi}]"));
            }
        }
    }
    Verdict::new(failures, "hand traces for alpha 0, 0.3, 1; 10000 random traces".into())
}

/// Direct evaluation of the BM25 sum, term by term.
fn bm25_oracle(query: &[String], corpus: &[Vec<String>]) -> Vec<f64> {
    let (k1, b) = (1.2, 0.75);
    let n = corpus.len() as f64;
    let total: usize = corpus.iter().map(Vec::len).sum();
    let avgdl = if corpus.is_empty() { 0.0 } else { total as f64 / n };
    let mut terms: Vec<&String> = Vec::new();
    for t in query {
        if !terms.contains(&t) {
            terms.push(t);
        }
    }
    corpus
        .iter()
        .map(|doc| {
            let mut score = 0.0;
            for t in &terms {
                let df = corpus.iter().filter(|d| d.contains(t)).count() as f64;
                let tf = doc.iter().filter(|w| w == t).count() as f64;
                if tf == 0.0 {
                    continue;
                }
                let idf = (1.0 + (n - df + 0.5) / (df + 0.5)).ln();
                let norm = if avgdl > 0.0 {
                    1.0 - b + b * doc.len() as f64 / avgdl
                } else {
                    1.0
                };
                score += idf * tf * (k1 + 1.0) / (tf + k1 * norm);
            }
            score
        })
        .collect()
}

fn sorted_by_score_then_id(c: &[RankedCandidate]) -> bool {
    c.windows(2).all(|w| {
        w[0].semantic_score > w[1].semantic_score
            || (w[0].semantic_score == w[1].semantic_score && w[0].tool_id < w[1].tool_id)
    })
}

fn bm25_and_candidates() -> Verdict {
    let mut failures = Vec::new();
    let vocab = [
        "hotel", "flight", "rain", "book", "cancel", "file", "doctor", "price", "seat", "wind",
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let word = |rng: &mut ChaCha8Rng| vocab[rng.random_range(0..vocab.len())].to_string();
    for corpus_no in 0..200 {
        let docs = rng.random_range(1..=20);
        let corpus: Vec<Vec<String>> = (0..docs)
            .map(|_| {
                let len = rng.random_range(0..=12);
                (0..len).map(|_| word(&mut rng)).collect()
            })
            .collect();
        let qlen = rng.random_range(1..=6);
        let query: Vec<String> = (0..qlen).map(|_| word(&mut rng)).collect();
        let got = bm25_scores(&query, &corpus);
        let want = bm25_oracle(&query, &corpus);
        if got.len() != want.len() {
            failures.push(format!(
                "corpus {corpus_no}: {} scores for {} docs",
                got.len(),
                want.len()
            ));
            continue;
        }
        for (i, (g, w)) in got.iter().zip(&want).enumerate() {
            if (g - w).abs() > 1e-9 {
                failures.push(format!("corpus {corpus_no} doc {i}: {g} != {w}"));
            }
        }
    }

    let scenario = Scenario::new(default_scenario(NetworkKind::Random)).unwrap();
    let registry = &scenario.registry;
    let words: Vec<String> = registry
        .tools()
        .iter()
        .flat_map(|t| qoe_route::retrieval::tokenize(&t.description))
        .collect();
    for q in 0..200 {
        let len = rng.random_range(1..=6);
        let text: Vec<String> = (0..len)
            .map(|_| words[rng.random_range(0..words.len())].clone())
            .collect();
        let text = text.join(" ");
        let k = rng.random_range(1..=5);
        let m = rng.random_range(1..=4);
        let params = MatchParams {
            k,
            m,
            tool_stage_uses_refined: false,
        };
        let servers = top_k_servers(&text, registry, None, k).unwrap();
        if servers.len() != k.min(registry.servers().len()) {
            failures.push(format!("query {q}: {} servers for k {k}", servers.len()));
        }
        let servers_sorted = servers
            .windows(2)
            .all(|w| w[0].score > w[1].score || (w[0].score == w[1].score && w[0].server_id < w[1].server_id));
        if !servers_sorted {
            failures.push(format!("query {q}: server ranking breaks the id tie-break"));
        }
        let cands = candidate_set(&text, &text, registry, None, params).unwrap();
        let expected_len: usize = servers
            .iter()
            .map(|s| registry.server(&s.server_id).unwrap().tool_ids.len().min(m))
            .sum();
        if cands.len() != expected_len || cands.len() > k * m {
            failures.push(format!(
                "query {q}: {} candidates, expected {expected_len} (k {k}, m {m})",
                cands.len()
            ));
        }
        if !sorted_by_score_then_id(&cands) {
            failures.push(format!("query {q}: candidates not ordered by score then tool id"));
        }
        if cands
            .iter()
            .any(|c| !servers.iter().any(|s| s.server_id == c.server_id))
        {
            failures.push(format!("query {q}: candidate outside the selected servers"));
        }
        if cands.iter().enumerate().any(|(i, c)| c.rank != i + 1) {
            failures.push(format!("query {q}: ranks are not 1..n"));
        }
    }
    Verdict::new(failures, "200 random corpora; 200 hierarchical queries".into())
}

/// Inclusive (w1, w2) rectangles per user type.
type Rect = (&'static str, (u8, u8), (u8, u8));

const RECTANGLES: [Rect; 9] = [
    ("impulsive", (9, 10), (2, 4)),
    ("efficient", (7, 9), (5, 7)),
    ("meticulous", (1, 4), (8, 10)),
    ("technical", (4, 6), (7, 9)),
    ("analytical", (5, 7), (9, 10)),
    ("practical", (4, 7), (4, 7)),
    ("casual", (3, 5), (3, 5)),
    ("emergency", (10, 10), (6, 8)),
    ("high_pressure", (9, 10), (9, 10)),
];

fn profile_generation() -> Verdict {
    let mut failures = Vec::new();
    let topics: Vec<String> = ["accommodation", "healthcare", "flight", "desktop", "weather"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for seed in 0..1000u64 {
        let profiles = generate_profiles(9, &topics, seed).unwrap();
        if profiles.len() != 9 {
            failures.push(format!("seed {seed}: {} profiles", profiles.len()));
            continue;
        }
        let mut per_topic: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
        for (i, p) in profiles.iter().enumerate() {
            let index = i + 1;
            let want_topic = if index <= 5 { index - 1 } else { 0 };
            if p.topic_id != want_topic {
                failures.push(format!("seed {seed}: user {index} on topic {}", p.topic_id));
            }
            let name = p.user_type.as_str();
            match RECTANGLES.iter().find(|r| r.0 == name) {
                Some((_, (lo1, hi1), (lo2, hi2))) => {
                    if !(lo1..=hi1).contains(&&p.w1) || !(lo2..=hi2).contains(&&p.w2) {
                        failures.push(format!("seed {seed}: {name} has ({}, {})", p.w1, p.w2));
                    }
                }
                None => failures.push(format!("seed {seed}: unknown type {name}")),
            }
            per_topic.entry(p.topic_id).or_default().push(name);
        }
        for (topic, types) in per_topic {
            let mut unique = types.clone();
            unique.sort_unstable();
            unique.dedup();
            if unique.len() != types.len() {
                failures.push(format!("seed {seed}: topic {topic} repeats a type"));
            }
        }
    }
    Verdict::new(failures, "1000 seeds, 9 users, 5 topics".into())
}

fn summary_of(run: &ScenarioRun) -> Vec<CategorySummary> {
    category_summary(&run.output.results)
}

fn mean_qoe(summary: &[CategorySummary], category: Category, policy: &str) -> Option<f64> {
    summary
        .iter()
        .find(|s| s.category == category && s.policy_name == policy)
        .map(|s| s.mean_qoe)
}

fn category_trend(runs: &[(&str, &ScenarioRun)], elapsed: Duration) -> Verdict {
    let mut failures = Vec::new();
    let jaunt = PolicyKind::Jaunt.label();
    let mut compared = 0;
    for (name, run) in runs {
        let summary = summary_of(run);
        for category in Category::ALL {
            let Some(j) = mean_qoe(&summary, category, jaunt) else {
                failures.push(format!("{name}/{category}: no JAUNT rows"));
                continue;
            };
            let mut rivals = vec![PolicyKind::DirRout, PolicyKind::PreRout];
            if matches!(category, Category::SpeedFirst | Category::AccuracyFirst) {
                rivals.push(PolicyKind::JauntGreedy);
            }
            for rival in rivals {
                let label = rival.label();
                match mean_qoe(&summary, category, label) {
                    Some(r) => {
                        compared += 1;
                        if j < r {
                            failures.push(format!("{name}/{category}: JAUNT {j:.4} < {label} {r:.4}"));
                        }
                    }
                    None => failures.push(format!("{name}/{category}: no {label} rows")),
                }
            }
        }
    }
    check_time(&mut failures, elapsed, Duration::from_secs(60));
    Verdict::new(failures, format!("{compared} comparisons, {:.2?}", elapsed))
}

fn greedy_tradeoff(runs: &[(&str, &ScenarioRun)]) -> Verdict {
    let jaunt = PolicyKind::Jaunt.label();
    let greedy = PolicyKind::JauntGreedy.label();
    let mut witnesses = Vec::new();
    for (name, run) in runs {
        let metrics = aggregate(&run.output.results);
        for j in metrics
            .per_user
            .iter()
            .filter(|a| a.policy_name == jaunt && a.category == Category::AccuracyFirst)
        {
            let Some(g) = metrics
                .per_user
                .iter()
                .find(|a| a.policy_name == greedy && a.user_id == j.user_id)
            else {
                continue;
            };
            if g.mean_latency_s < j.mean_latency_s && g.accuracy < 0.5 * j.accuracy {
                witnesses.push(format!(
                    "{name}/{}: latency {:.3} < {:.3} s, accuracy {:.3} vs {:.3}",
                    j.user_id, g.mean_latency_s, j.mean_latency_s, g.accuracy, j.accuracy
                ));
            }
        }
    }
    if witnesses.is_empty() {
        Verdict {
            pass: false,
            detail: "no accuracy-first user where the greedy router is faster but under half as accurate".into(),
        }
    } else {
        Verdict {
            pass: true,
            detail: format!("{} users, e.g. {}", witnesses.len(), witnesses[0]),
        }
    }
}

fn jaunt_mean(results: &[EpisodeResult]) -> f64 {
    let rows: Vec<f64> = results
        .iter()
        .filter(|r| r.policy_name == PolicyKind::Jaunt.label())
        .map(|r| r.qoe)
        .collect();
    rows.iter().sum::<f64>() / rows.len().max(1) as f64
}

fn profile_learning() -> Verdict {
    let run = |update: bool| -> ScenarioRun {
        let mut cfg: ScenarioConfig = default_scenario(NetworkKind::Random);
        cfg.policies = vec![PolicyKind::Jaunt];
        cfg.profile.init = ProfileInit::Mismatched;
        cfg.profile.update = update;
        run_mock(&Scenario::new(cfg).unwrap(), true).unwrap()
    };
    let learning = jaunt_mean(&run(true).output.results);
    let frozen = jaunt_mean(&run(false).output.results);
    let gain = (learning - frozen) / frozen.abs();
    let detail = format!("updated {learning:.4} vs frozen {frozen:.4} ({:+.1}%)", 100.0 * gain);
    Verdict {
        pass: gain >= 0.05,
        detail,
    }
}

fn episodes_bytes(run: &ScenarioRun, name: &str) -> Vec<u8> {
    let dir = tempfile::tempdir().unwrap();
    let metrics = aggregate(&run.output.results);
    let traces = [ScenarioTraces {
        scenario: name,
        traces: &run.output.traces,
    }];
    emit_csv(&metrics, &run.output.results, &traces, dir.path()).unwrap();
    fs::read(dir.path().join(EPISODES_CSV)).unwrap()
}

fn determinism(first: &ScenarioRun) -> Verdict {
    let mut failures = Vec::new();
    let scenario = Scenario::new(default_scenario(NetworkKind::Random)).unwrap();
    let again = run_mock(&scenario, true).unwrap();
    let a = episodes_bytes(first, "random");
    let b = episodes_bytes(&again, "random");
    if a != b {
        failures.push("two parallel runs wrote different episodes.csv".into());
    }
    let sequential = run_mock(&scenario, false).unwrap();
    let mut by_seed: BTreeMap<u64, (Vec<&EpisodeResult>, Vec<&EpisodeResult>)> = BTreeMap::new();
    for r in &first.output.results {
        by_seed.entry(r.seed).or_default().0.push(r);
    }
    for r in &sequential.output.results {
        by_seed.entry(r.seed).or_default().1.push(r);
    }
    for (seed, (par, seq)) in &by_seed {
        if par != seq {
            failures.push(format!("seed {seed}: parallel and sequential rows differ"));
        }
    }
    Verdict::new(
        failures,
        format!(
            "{} bytes identical; {} seeds match sequentially",
            a.len(),
            by_seed.len()
        ),
    )
}

fn timed<F: FnOnce() -> Verdict>(limit: Option<Duration>, f: F) -> Verdict {
    let start = Instant::now();
    let mut v = f();
    let elapsed = start.elapsed();
    if let Some(limit) = limit {
        if elapsed > limit {
            v.pass = false;
            v.detail = format!("{}; runtime {:.2?} exceeds {:.0?}", v.detail, elapsed, limit);
            return v;
        }
    }
    v.detail = format!("{} [{:.2?}]", v.detail, elapsed);
    v
}

fn main() -> ExitCode {
    let mut verdicts: Vec<(u8, &str, Verdict)> = vec![
        (1, "QoE kernel", timed(Some(Duration::from_secs(1)), qoe_kernel)),
        (2, "EWMA predictor", timed(Some(Duration::from_secs(1)), ewma)),
        (
            3,
            "BM25 and candidate sets",
            timed(Some(Duration::from_secs(5)), bm25_and_candidates),
        ),
        (
            4,
            "profile generation",
            timed(Some(Duration::from_secs(5)), profile_generation),
        ),
    ];

    let start = Instant::now();
    let random = run_mock(&Scenario::new(default_scenario(NetworkKind::Random)).unwrap(), true).unwrap();
    let smooth = run_mock(&Scenario::new(default_scenario(NetworkKind::Smooth)).unwrap(), true).unwrap();
    let elapsed = start.elapsed();
    let runs = [("random", &random), ("smooth", &smooth)];
    verdicts.push((5, "JAUNT category trend", category_trend(&runs, elapsed)));
    verdicts.push((6, "greedy latency/accuracy trade", greedy_tradeoff(&runs)));
    verdicts.push((7, "profile updates vs frozen mismatch", timed(None, profile_learning)));
    verdicts.push((8, "determinism", timed(None, || determinism(&random))));

    let mut failed = 0;
    for (n, name, v) in &verdicts {
        let tag = if v.pass { "PASS" } else { "FAIL" };
        if !v.pass {
            failed += 1;
        }
        println!("{tag} criterion {n}: {name}: {}", v.detail);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} of {} criteria failed", verdicts.len());
        ExitCode::FAILURE
    }
}
