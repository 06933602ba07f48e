//! Prompt templates for the model-backed routing steps, and parsers for both
//! the prompts (used by the mock backend) and the model replies.

use super::{AgentProfileView, RoutingContext};

pub const REFINE_SYSTEM: &str = "You are the intent extractor of a tool router. Rewrite the user's request \
as a short description of the tool functionality it needs. Drop greetings, emotion, filler words, names, \
places and dates. Answer with the description only, on one line.";

pub const CATEGORY_SYSTEM_HEAD: &str = "You are the category predictor of a tool router. Pick the single \
tool category that best fits the user's request.";

pub const ROUTE_SYSTEM: &str = "You are a QoE-aware tool router for an LLM agent. Every candidate tool \
has a semantic relevance score and a predicted network latency. Pick the tool that gives this user the \
best quality of experience.";

pub const ROUTE_INSTRUCTIONS: &str = "Weigh relevance against delay for this user. A user with a high \
waiting_time_sensitivity loses satisfaction quickly once latency grows past latency_threshold_s; a user \
with a high task_satisfaction cares more about getting the right tool than a fast one. Both weights are on \
a 1 to 10 scale. Reply with exactly one line: SELECTED: <tool_id>";

pub const PROFILE_SYSTEM: &str = "You maintain a running model of a user's latency and accuracy \
preferences for a tool router.";

pub const PROFILE_INSTRUCTIONS: &str = "Infer from the wording of the latest query and from the outcome \
whether the user cares more about speed or about accuracy. Reply with exactly two lines:\n\
NOTES: <one sentence describing the user's preferences>\n\
ADJUST: w1=<change between -1 and 1> w2=<change between -1 and 1>";

pub fn category_system(categories: &[&str]) -> String {
    format!(
        "{CATEGORY_SYSTEM_HEAD}\nCATEGORIES: {}\nAnswer with the category name only.",
        categories.join(", ")
    )
}

/// Categories listed in a category prompt.
pub fn parse_categories(system_text: &str) -> Option<Vec<String>> {
    let line = system_text.lines().find_map(|l| l.strip_prefix("CATEGORIES: "))?;
    Some(
        line.split(", ")
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect(),
    )
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

pub fn render_route_prompt(ctx: &RoutingContext) -> (String, String) {
    let mut user = format!("QUERY:\n{}\n\nCANDIDATES:\n", one_line(&ctx.raw_query));
    for (i, c) in ctx.candidates.iter().enumerate() {
        user.push_str(&format!(
            "{}. tool_id={} | server={} | semantic_score={} | predicted_latency_s={} | description={}\n",
            i + 1,
            c.tool_id,
            c.server_id,
            c.semantic_score,
            c.predicted_latency,
            one_line(&c.description)
        ));
    }
    user.push_str(&format!(
        "\nUSER PROFILE:\nwaiting_time_sensitivity={}\ntask_satisfaction={}\nlatency_threshold_s={}\nnotes={}\n\
         \nINSTRUCTIONS:\n{ROUTE_INSTRUCTIONS}",
        ctx.profile.est_w1,
        ctx.profile.est_w2,
        ctx.l_th,
        one_line(&ctx.profile.preference_notes)
    ));
    (ROUTE_SYSTEM.to_string(), user)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedRoutePrompt {
    /// `(tool_id, semantic_score, predicted_latency_s)` in prompt order.
    pub candidates: Vec<(String, f64, f64)>,
    pub w1: f64,
    pub w2: f64,
    pub l_th: f64,
}

fn section<'a>(text: &'a str, header: &str) -> Option<&'a str> {
    let start = text.find(&format!("{header}:\n"))? + header.len() + 2;
    let rest = &text[start..];
    let end = rest.find("\n\n").unwrap_or(rest.len());
    Some(&rest[..end])
}

fn key_values(text: &str) -> impl Iterator<Item = (&str, &str)> {
    text.lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.trim(), v.trim()))
}

fn number(fields: &[(&str, &str)], key: &str) -> Option<f64> {
    fields.iter().find(|(k, _)| *k == key)?.1.parse().ok()
}

pub fn parse_route_prompt(user_text: &str) -> Option<ParsedRoutePrompt> {
    let mut candidates = Vec::new();
    for line in section(user_text, "CANDIDATES")?.lines() {
        let (_, fields) = line.split_once(". ")?;
        let parts: Vec<(&str, &str)> = fields.splitn(5, " | ").filter_map(|p| p.split_once('=')).collect();
        let id = parts.iter().find(|(k, _)| *k == "tool_id")?.1.to_string();
        candidates.push((
            id,
            number(&parts, "semantic_score")?,
            number(&parts, "predicted_latency_s")?,
        ));
    }
    let profile: Vec<(&str, &str)> = key_values(section(user_text, "USER PROFILE")?).collect();
    Some(ParsedRoutePrompt {
        candidates,
        w1: number(&profile, "waiting_time_sensitivity")?,
        w2: number(&profile, "task_satisfaction")?,
        l_th: number(&profile, "latency_threshold_s")?,
    })
}

/// The tool named on a `SELECTED:` line, if it is one of `allowed`.
pub fn parse_selection<'a>(reply: &str, allowed: impl IntoIterator<Item = &'a str>) -> Option<String> {
    let allowed: Vec<&str> = allowed.into_iter().collect();
    reply.lines().find_map(|line| {
        let line = line.trim().trim_matches(|c| c == '*' || c == '`').trim();
        let upper = line.to_ascii_uppercase();
        if !upper.starts_with("SELECTED:") {
            return None;
        }
        let id = line["SELECTED:".len()..]
            .trim()
            .trim_matches(|c: char| c == '`' || c == '"' || c == '\'' || c == '*' || c == '.' || c == '<' || c == '>');
        allowed.contains(&id).then(|| id.to_string())
    })
}

pub fn render_profile_prompt(
    view: &AgentProfileView,
    query_text: &str,
    success: bool,
    latency_s: f64,
    qoe: f64,
) -> (String, String) {
    let user = format!(
        "CURRENT PROFILE:\nwaiting_time_sensitivity={}\ntask_satisfaction={}\nnotes={}\n\n\
         LATEST QUERY:\n{}\n\nOUTCOME:\nsuccess={success}\nlatency_s={latency_s}\nqoe={qoe}\n\n\
         INSTRUCTIONS:\n{PROFILE_INSTRUCTIONS}",
        view.est_w1,
        view.est_w2,
        one_line(&view.preference_notes),
        one_line(query_text)
    );
    (PROFILE_SYSTEM.to_string(), user)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedProfilePrompt {
    pub w1: f64,
    pub w2: f64,
    pub query_text: String,
    pub success: bool,
}

pub fn parse_profile_prompt(user_text: &str) -> Option<ParsedProfilePrompt> {
    let profile: Vec<(&str, &str)> = key_values(section(user_text, "CURRENT PROFILE")?).collect();
    let outcome: Vec<(&str, &str)> = key_values(section(user_text, "OUTCOME")?).collect();
    Some(ParsedProfilePrompt {
        w1: number(&profile, "waiting_time_sensitivity")?,
        w2: number(&profile, "task_satisfaction")?,
        query_text: section(user_text, "LATEST QUERY")?.to_string(),
        success: outcome.iter().find(|(k, _)| *k == "success")?.1.parse().ok()?,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileReply {
    pub notes: String,
    pub d_w1: f64,
    pub d_w2: f64,
}

pub fn render_profile_reply(reply: &ProfileReply) -> String {
    format!(
        "NOTES: {}\nADJUST: w1={:+} w2={:+}",
        reply.notes, reply.d_w1, reply.d_w2
    )
}

/// Reads the `NOTES:` and `ADJUST:` lines; both deltas must be finite.
pub fn parse_profile_reply(reply: &str) -> Option<ProfileReply> {
    let mut notes = None;
    let mut deltas = None;
    for line in reply.lines() {
        let line = line.trim().trim_matches('*').trim();
        if let Some(rest) = line.strip_prefix("NOTES:") {
            notes = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("ADJUST:") {
            let mut d1 = None;
            let mut d2 = None;
            for part in rest.split(|c: char| c.is_whitespace() || c == ',') {
                if let Some((k, v)) = part.split_once('=') {
                    let v: Option<f64> = v.trim().parse().ok().filter(|x: &f64| x.is_finite());
                    match k.trim() {
                        "w1" => d1 = v,
                        "w2" => d2 = v,
                        _ => {}
                    }
                }
            }
            deltas = Some((d1?, d2?));
        }
    }
    let (d_w1, d_w2) = deltas?;
    Some(ProfileReply {
        notes: notes.unwrap_or_default(),
        d_w1,
        d_w2,
    })
}
