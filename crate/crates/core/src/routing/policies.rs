use std::cmp::Ordering;

use super::prompt::{self, parse_selection, render_route_prompt};
use super::{DecisionMode, PolicyKind, RoutingContext, RoutingDecision, RoutingError};
use crate::llm::{GenerationRequest, RequestTag, TextGenerator};
use crate::retrieval::{candidate_set, rank_all_tools, MatchParams, Registry};

fn decision(policy: PolicyKind, selected: String, ranking: Vec<String>, rationale: String) -> RoutingDecision {
    RoutingDecision {
        selected_tool: selected,
        ranking,
        rationale,
        policy_name: policy.label().to_string(),
    }
}

/// Highest BM25 score of the raw query over every tool description.
pub fn dir_rout(raw_query: &str, registry: &Registry) -> Result<RoutingDecision, RoutingError> {
    let ranked = rank_all_tools(raw_query, registry);
    let top = ranked.first().ok_or(RoutingError::EmptyCandidates)?;
    let rationale = format!("highest semantic score {:.3} over all tools", top.semantic_score);
    let selected = top.tool_id.clone();
    Ok(decision(
        PolicyKind::DirRout,
        selected,
        ranked.into_iter().map(|c| c.tool_id).collect(),
        rationale,
    ))
}

/// Asks the model for the query's category; `None` if the reply names no
/// known category.
pub fn predict_category(
    raw_query: &str,
    registry: &Registry,
    llm: &dyn TextGenerator,
) -> Result<Option<String>, RoutingError> {
    let topics = registry.topics();
    let request = GenerationRequest::new(RequestTag::Refine, prompt::category_system(&topics), raw_query)?;
    let reply = llm.generate(&request)?.text;
    let reply = reply
        .trim()
        .trim_matches(|c: char| !c.is_alphanumeric() && c != '_' && c != '-');
    Ok(topics
        .into_iter()
        .find(|t| t.eq_ignore_ascii_case(reply))
        .map(str::to_string))
}

/// Category prediction, then hierarchical matching of the raw query inside
/// that category. Falls back to `dir_rout` when the category is unusable.
pub fn pre_rout(
    raw_query: &str,
    registry: &Registry,
    llm: &dyn TextGenerator,
    params: MatchParams,
) -> Result<RoutingDecision, RoutingError> {
    let category = match predict_category(raw_query, registry, llm) {
        Ok(c) => c,
        Err(e) => {
            log::warn!("category prediction failed, falling back to global matching: {e}");
            None
        }
    };
    let Some(category) = category else {
        let mut d = dir_rout(raw_query, registry)?;
        d.policy_name = PolicyKind::PreRout.label().to_string();
        d.rationale = format!("no usable category; {}", d.rationale);
        return Ok(d);
    };
    let ranked = candidate_set(raw_query, raw_query, registry, Some(&category), params)?;
    let top = ranked.first().ok_or(RoutingError::EmptyCandidates)?;
    let rationale = format!("category {category}, best in-category score {:.3}", top.semantic_score);
    let selected = top.tool_id.clone();
    Ok(decision(
        PolicyKind::PreRout,
        selected,
        ranked.into_iter().map(|c| c.tool_id).collect(),
        rationale,
    ))
}

/// Stage-one refinement of the raw query. Falls back to the raw query on
/// any model failure or an empty reply.
pub fn refine_query(raw_query: &str, llm: &dyn TextGenerator) -> String {
    let reply =
        GenerationRequest::new(RequestTag::Refine, prompt::REFINE_SYSTEM, raw_query).and_then(|req| llm.generate(&req));
    match reply {
        Ok(resp) => {
            let line = resp.text.lines().map(str::trim).find(|l| !l.is_empty()).unwrap_or("");
            if line.is_empty() {
                raw_query.to_string()
            } else {
                line.to_string()
            }
        }
        Err(e) => {
            log::warn!("refinement failed, using the raw query: {e}");
            raw_query.to_string()
        }
    }
}

/// Smallest predicted latency; ties go to the higher semantic score, then
/// the smaller tool id.
pub fn jaunt_greedy(ctx: &RoutingContext) -> Result<RoutingDecision, RoutingError> {
    let mut order: Vec<&super::ScoredCandidate> = ctx.candidates.iter().collect();
    order.sort_by(|a, b| {
        a.predicted_latency
            .total_cmp(&b.predicted_latency)
            .then_with(|| b.semantic_score.total_cmp(&a.semantic_score))
            .then_with(|| a.tool_id.cmp(&b.tool_id))
    });
    let top = order.first().ok_or(RoutingError::EmptyCandidates)?;
    Ok(decision(
        PolicyKind::JauntGreedy,
        top.tool_id.clone(),
        order.iter().map(|c| c.tool_id.clone()).collect(),
        format!("lowest predicted latency {:.3} s", top.predicted_latency),
    ))
}

/// `w2 * s_norm - w1 * ln(1 + L / l_th)` per candidate, with semantic scores
/// min-max normalised over the set (all 1 when they are equal).
pub fn mock_jaunt_scores(semantic: &[f64], latency: &[f64], w1: f64, w2: f64, l_th: f64) -> Vec<f64> {
    let lo = semantic.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = semantic.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    semantic
        .iter()
        .zip(latency)
        .map(|(&s, &l)| {
            let s_norm = if hi > lo { (s - lo) / (hi - lo) } else { 1.0 };
            w2 * s_norm - w1 * (l.max(0.0) / l_th).ln_1p()
        })
        .collect()
}

/// Index of the best mock score; the first one wins ties, so candidate order
/// (semantic score, then id) breaks them.
pub fn mock_select(semantic: &[f64], latency: &[f64], w1: f64, w2: f64, l_th: f64) -> Option<usize> {
    let scores = mock_jaunt_scores(semantic, latency, w1, w2, l_th);
    let mut best: Option<usize> = None;
    for (i, s) in scores.iter().enumerate() {
        match best {
            Some(b) if scores[b].total_cmp(s) != Ordering::Less => {}
            _ => best = Some(i),
        }
    }
    best
}

fn mock_decision(ctx: &RoutingContext, note: &str) -> Result<RoutingDecision, RoutingError> {
    let semantic: Vec<f64> = ctx.candidates.iter().map(|c| c.semantic_score).collect();
    let latency: Vec<f64> = ctx.candidates.iter().map(|c| c.predicted_latency).collect();
    let (w1, w2) = (ctx.profile.est_w1, ctx.profile.est_w2);
    let scores = mock_jaunt_scores(&semantic, &latency, w1, w2, ctx.l_th);
    let best = mock_select(&semantic, &latency, w1, w2, ctx.l_th).ok_or(RoutingError::EmptyCandidates)?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    let c = &ctx.candidates[best];
    Ok(decision(
        PolicyKind::Jaunt,
        c.tool_id.clone(),
        order.iter().map(|&i| ctx.candidates[i].tool_id.clone()).collect(),
        format!(
            "{note}utility {:.3} (semantic {:.3}, predicted {:.3} s, w1 {:.2}, w2 {:.2})",
            scores[best], c.semantic_score, c.predicted_latency, w1, w2
        ),
    ))
}

/// QoE-aware selection. `Mock` applies the utility rule directly; `Live`
/// sends the four-section prompt, retries once on an unusable reply, then
/// falls back to the rule.
pub fn jaunt_decide(
    ctx: &RoutingContext,
    llm: &dyn TextGenerator,
    mode: DecisionMode,
) -> Result<RoutingDecision, RoutingError> {
    if ctx.candidates.is_empty() {
        return Err(RoutingError::EmptyCandidates);
    }
    if mode == DecisionMode::Mock {
        return mock_decision(ctx, "");
    }
    let (system, user) = render_route_prompt(ctx);
    let request = GenerationRequest::new(RequestTag::Route, system, user)?;
    let allowed: Vec<&str> = ctx.candidates.iter().map(|c| c.tool_id.as_str()).collect();
    for attempt in 1..=2 {
        match llm.generate(&request) {
            Ok(resp) => {
                if let Some(id) = parse_selection(&resp.text, allowed.iter().copied()) {
                    let mut ranking = vec![id.clone()];
                    ranking.extend(allowed.iter().filter(|t| **t != id).map(|t| t.to_string()));
                    return Ok(decision(
                        PolicyKind::Jaunt,
                        id,
                        ranking,
                        format!("model reply: {}", resp.text.trim()),
                    ));
                }
                log::warn!("route reply attempt {attempt} named no candidate: {:?}", resp.text);
            }
            Err(e) => log::warn!("route request attempt {attempt} failed: {e}"),
        }
    }
    mock_decision(ctx, "fallback rule after unusable model replies; ")
}
