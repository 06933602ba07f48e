use std::collections::BTreeMap;

use super::profile::UserType;
use super::query::{intent_phrase, AmbiguityType, ClearQuerySpec, Tone, VERIFICATION};
use super::TripError;
use crate::lexicon::colloquialize;
use crate::llm::{GenerationRequest, RequestTag, TextGenerator};

/// Produces the three text variants of a benchmark query.
pub trait Rewriter: Send + Sync {
    fn clear_query(&self, spec: &ClearQuerySpec) -> Result<String, TripError>;

    /// Rewrites a clear query so that it shows one ambiguity type. `variant`
    /// picks among equivalent phrasings.
    fn ambiguate(
        &self,
        spec: &ClearQuerySpec,
        clear_text: &str,
        kind: AmbiguityType,
        variant: u64,
    ) -> Result<String, TripError>;

    /// Re-voices `text` in `tone`; `intensity` in [0.5, 1] scales the markers.
    fn apply_tone(&self, text: &str, tone: Tone, intensity: f64) -> Result<String, TripError>;
}

pub const DISTRACTORS: &[&str] = &[
    "email the menu to my friend",
    "find good sushi places nearby",
    "remind me to call my sister",
    "order a pizza for tonight",
    "play some jazz",
    "translate this into French",
];

/// Deterministic rule-based rewriter.
#[derive(Debug, Clone, Copy, Default)]
pub struct TemplateRewriter;

impl TemplateRewriter {
    fn compose(spec: &ClearQuerySpec, body: &str, with_slots: bool, tail: &str) -> String {
        let mut text = String::from(spec.user_type.opener());
        text.push_str(body);
        if with_slots {
            for slot in &spec.slots {
                text.push(' ');
                text.push_str(slot);
            }
        }
        if spec.complexity >= 3 {
            text.push_str(VERIFICATION);
        }
        text.push_str(tail);
        text.push('.');
        text
    }

    fn head_noun(spec: &ClearQuerySpec) -> &str {
        spec.tool_name.rsplit('_').next().unwrap_or(&spec.tool_name)
    }
}

impl Rewriter for TemplateRewriter {
    fn clear_query(&self, spec: &ClearQuerySpec) -> Result<String, TripError> {
        let intent = intent_phrase(&spec.tool_description);
        if intent.is_empty() {
            return Err(TripError::Rewrite(format!(
                "tool {} has an empty description",
                spec.tool_id
            )));
        }
        Ok(Self::compose(spec, &intent, true, ""))
    }

    fn ambiguate(
        &self,
        spec: &ClearQuerySpec,
        _clear_text: &str,
        kind: AmbiguityType,
        variant: u64,
    ) -> Result<String, TripError> {
        let intent = intent_phrase(&spec.tool_description);
        let text = match kind {
            AmbiguityType::ReferenceAmbiguity => {
                let body = format!("do that {} thing again", Self::head_noun(spec));
                Self::compose(spec, &body, true, "")
            }
            AmbiguityType::InformationMissing => Self::compose(spec, &intent, false, ""),
            AmbiguityType::TerminologyInaccuracy => match colloquialize(&intent) {
                Some(body) => Self::compose(spec, &body, true, ""),
                None => {
                    let body = format!("{intent}, or whatever it's called,");
                    Self::compose(spec, &body, true, "")
                }
            },
            AmbiguityType::MultiIntentMixing => {
                let extra = DISTRACTORS[(variant % DISTRACTORS.len() as u64) as usize];
                Self::compose(spec, &intent, true, &format!(" and also {extra}"))
            }
        };
        Ok(text)
    }

    fn apply_tone(&self, text: &str, tone: Tone, intensity: f64) -> Result<String, TripError> {
        if !(0.0..=1.0).contains(&intensity) {
            return Err(TripError::Rewrite(format!("intensity {intensity} outside [0, 1]")));
        }
        let closers = tone.closers();
        let n = marker_count(intensity, closers.len());
        let opener = tone.opener();
        let mut body = text.trim().to_string();
        if !opener.ends_with(". ") && !opener.ends_with("! ") {
            body = lower_first(&body);
        }
        if tone == Tone::FrustratedAngry {
            body = body.trim_end_matches('.').to_string();
        }
        Ok(format!("{opener}{body} {}", closers[..n].join(" ")))
    }
}

/// 1 marker at intensity 0.5, all of them at 1.0.
pub fn marker_count(intensity: f64, available: usize) -> usize {
    let frac = ((intensity - 0.5) / 0.5).clamp(0.0, 1.0);
    (1 + (frac * (available - 1) as f64).round() as usize).min(available)
}

fn lower_first(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_lowercase().chain(chars).collect(),
        None => String::new(),
    }
}

const REWRITE_SYSTEM: &str = "You write realistic user requests for a tool-use benchmark.";

pub(crate) fn spec_to_lines(spec: &ClearQuerySpec) -> String {
    format!(
        "TOOL_ID: {}\nTOOL_NAME: {}\nTOOL_DESCRIPTION: {}\nTOPIC: {}\nUSER_TYPE: {}\nCOMPLEXITY: {}\nSLOTS: {}",
        spec.tool_id,
        spec.tool_name,
        spec.tool_description,
        spec.topic,
        spec.user_type,
        spec.complexity,
        spec.slots.join(" | ")
    )
}

/// `KEY: value` lines of a prompt.
pub(crate) fn prompt_fields(text: &str) -> BTreeMap<String, String> {
    text.lines()
        .filter_map(|line| line.split_once(": "))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect()
}

pub(crate) fn spec_from_fields(fields: &BTreeMap<String, String>) -> Option<ClearQuerySpec> {
    let user_type: UserType = fields.get("USER_TYPE")?.parse().ok()?;
    let slots = fields
        .get("SLOTS")
        .map(|s| s.split(" | ").filter(|x| !x.is_empty()).map(str::to_string).collect())
        .unwrap_or_default();
    Some(ClearQuerySpec {
        user_type,
        topic: fields.get("TOPIC")?.clone(),
        tool_id: fields.get("TOOL_ID")?.clone(),
        tool_name: fields.get("TOOL_NAME")?.clone(),
        tool_description: fields.get("TOOL_DESCRIPTION")?.clone(),
        slots,
        complexity: fields.get("COMPLEXITY")?.parse().ok()?,
    })
}

fn ambiguity_instruction(kind: AmbiguityType) -> &'static str {
    match kind {
        AmbiguityType::ReferenceAmbiguity => {
            "Replace the explicit request with a vague reference to something discussed earlier, such as \"do that thing again\"."
        }
        AmbiguityType::InformationMissing => "Remove the concrete details (places, dates, people, folders) but keep the request.",
        AmbiguityType::TerminologyInaccuracy => {
            "Replace the precise technical terms with casual or slightly wrong everyday words."
        }
        AmbiguityType::MultiIntentMixing => "Add a second, unrelated request to the same message.",
    }
}

/// Rewriter that delegates phrasing to a language model.
pub struct LlmRewriter<'a> {
    llm: &'a dyn TextGenerator,
}

impl<'a> LlmRewriter<'a> {
    pub fn new(llm: &'a dyn TextGenerator) -> Self {
        Self { llm }
    }

    fn call(&self, system: String, user: String) -> Result<String, TripError> {
        let request = GenerationRequest::new(RequestTag::Rewrite, system, user)?;
        let text = self.llm.generate(&request)?.text.trim().to_string();
        if text.is_empty() {
            return Err(TripError::Rewrite("model returned an empty rewrite".into()));
        }
        Ok(text)
    }
}

impl Rewriter for LlmRewriter<'_> {
    fn clear_query(&self, spec: &ClearQuerySpec) -> Result<String, TripError> {
        let system = format!(
            "{REWRITE_SYSTEM}\nOPERATION: clear_query\nWrite one natural request that a {} user would send \
             to an assistant so that the tool below is the right one to call. Mention every slot value \
             verbatim. Answer with the request only.",
            spec.user_type
        );
        self.call(system, spec_to_lines(spec))
    }

    fn ambiguate(
        &self,
        spec: &ClearQuerySpec,
        clear_text: &str,
        kind: AmbiguityType,
        variant: u64,
    ) -> Result<String, TripError> {
        let system = format!(
            "{REWRITE_SYSTEM}\nOPERATION: ambiguity {kind}\n{} Keep the user's voice. Answer with the rewritten request only.",
            ambiguity_instruction(kind)
        );
        let user = format!("{}\nVARIANT: {variant}\nCLEAR_QUERY: {clear_text}", spec_to_lines(spec));
        let text = self.call(system, user)?;
        if text == clear_text {
            return Err(TripError::Rewrite(
                "ambiguity rewrite returned the clear query unchanged".into(),
            ));
        }
        Ok(text)
    }

    fn apply_tone(&self, text: &str, tone: Tone, intensity: f64) -> Result<String, TripError> {
        let system = format!(
            "{REWRITE_SYSTEM}\nOPERATION: tone {tone} {intensity}\nRewrite the request in a {} tone with \
             emotional intensity {intensity:.2} on a 0 to 1 scale. Keep the request itself unchanged. \
             Answer with the rewritten request only.",
            tone.as_str().replace('_', " and ")
        );
        self.call(system, text.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(user_type: UserType, complexity: u8) -> ClearQuerySpec {
        ClearQuerySpec {
            user_type,
            topic: "weather".into(),
            tool_id: "weather.forecast".into(),
            tool_name: "forecast".into(),
            tool_description: "Get the multi-day weather forecast for a city. Includes rain chance.".into(),
            slots: vec!["in Oslo".into(), "for June 3".into()],
            complexity,
        }
    }

    #[test]
    fn clear_query_golden() {
        let t = TemplateRewriter;
        assert_eq!(
            t.clear_query(&spec(UserType::Practical, 2)).unwrap(),
            "Can you get the multi-day weather forecast for a city in Oslo for June 3."
        );
        assert_eq!(
            t.clear_query(&spec(UserType::Meticulous, 3)).unwrap(),
            "I would like you to get the multi-day weather forecast for a city in Oslo for June 3, \
             and please verify everything thoroughly."
        );
    }

    #[test]
    fn ambiguity_golden() {
        let t = TemplateRewriter;
        let s = spec(UserType::Casual, 2);
        let clear = t.clear_query(&s).unwrap();
        let amb = |k| t.ambiguate(&s, &clear, k, 1).unwrap();
        assert_eq!(
            amb(AmbiguityType::ReferenceAmbiguity),
            "Hey, do that forecast thing again in Oslo for June 3."
        );
        assert_eq!(
            amb(AmbiguityType::InformationMissing),
            "Hey, get the multi-day weather forecast for a city."
        );
        assert_eq!(
            amb(AmbiguityType::TerminologyInaccuracy),
            "Hey, get the multi day sky outlook for a city in Oslo for June 3."
        );
        assert_eq!(
            amb(AmbiguityType::MultiIntentMixing),
            "Hey, get the multi-day weather forecast for a city in Oslo for June 3 and also find good sushi places nearby."
        );
        for k in AmbiguityType::ALL {
            assert_ne!(amb(k), clear);
        }
    }

    #[test]
    fn tone_golden() {
        let t = TemplateRewriter;
        assert_eq!(
            t.apply_tone("Quick, find hotels in Oslo.", Tone::FrustratedAngry, 0.5)
                .unwrap(),
            "Just quick, find hotels in Oslo already!"
        );
        assert_eq!(
            t.apply_tone("Quick, find hotels in Oslo.", Tone::FrustratedAngry, 1.0)
                .unwrap(),
            "Just quick, find hotels in Oslo already! Are you even trying? This is unacceptable! How hard can this be?"
        );
        assert_eq!(
            t.apply_tone("Right now, find hotels.", Tone::DemandingUrgent, 0.5)
                .unwrap(),
            "I need this EXACTLY right, NOW! Right now, find hotels. Don't mess this up!"
        );
        assert!(t.apply_tone("x", Tone::CasualIndifferent, 1.5).is_err());
    }

    #[test]
    fn marker_counts() {
        assert_eq!(marker_count(0.5, 4), 1);
        assert_eq!(marker_count(0.75, 4), 3);
        assert_eq!(marker_count(1.0, 4), 4);
        assert_eq!(marker_count(1.0, 3), 3);
    }

    #[test]
    fn spec_round_trips_through_prompt_lines() {
        let s = spec(UserType::HighPressure, 2);
        assert_eq!(spec_from_fields(&prompt_fields(&spec_to_lines(&s))), Some(s));
    }
}
