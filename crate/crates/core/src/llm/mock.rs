use super::{word_count, Backend, GenerationRequest, GenerationResponse, LlmError, RequestTag, TextGenerator};
use crate::lexicon::Lexicon;
use crate::retrieval::{bm25_scores, tokenize};
use crate::routing::profile_update::{apply_update_rule, DEFAULT_DELTA};
use crate::routing::prompt::{
    parse_categories, parse_profile_prompt, parse_route_prompt, render_profile_reply, ProfileReply,
};
use crate::routing::{mock_select, AgentProfileView};
use crate::trip::detect_tone;
use crate::trip::query::{AmbiguityType, Tone};
use crate::trip::rewriter::{prompt_fields, spec_from_fields, Rewriter, TemplateRewriter};

/// Offline backend: answers every prompt shape this crate sends with the
/// same deterministic rules the mock decision mode uses.
#[derive(Debug, Clone)]
pub struct MockLlm {
    lexicon: Lexicon,
    profile_delta: f64,
}

impl MockLlm {
    /// Mock whose refiner only strips filler words.
    pub fn builtin() -> Self {
        Self::new(Lexicon::builtin())
    }

    pub fn new(lexicon: Lexicon) -> Self {
        Self {
            lexicon,
            profile_delta: DEFAULT_DELTA,
        }
    }

    pub fn with_profile_delta(mut self, delta: f64) -> Self {
        self.profile_delta = delta;
        self
    }

    fn refine_or_categorise(&self, req: &GenerationRequest) -> Result<String, LlmError> {
        let refined = self.lexicon.refine(&req.user_text);
        let Some(categories) = parse_categories(&req.system_text) else {
            return Ok(refined);
        };
        let docs: Vec<(&String, &Vec<String>)> = self
            .lexicon
            .topic_docs()
            .iter()
            .filter(|(t, _)| categories.contains(t))
            .map(|(t, d)| (t, d))
            .collect();
        if docs.is_empty() {
            return categories
                .first()
                .cloned()
                .ok_or_else(|| LlmError::Unsupported("category prompt lists no categories".into()));
        }
        let corpus: Vec<Vec<String>> = docs.iter().map(|(_, d)| (*d).clone()).collect();
        let scores = bm25_scores(&tokenize(&refined), &corpus);
        let mut best = 0;
        for (i, s) in scores.iter().enumerate() {
            if *s > scores[best] {
                best = i;
            }
        }
        Ok(docs[best].0.clone())
    }

    fn route(&self, req: &GenerationRequest) -> Result<String, LlmError> {
        let parsed = parse_route_prompt(&req.user_text)
            .ok_or_else(|| LlmError::Unsupported("route prompt is missing a section".into()))?;
        let semantic: Vec<f64> = parsed.candidates.iter().map(|c| c.1).collect();
        let latency: Vec<f64> = parsed.candidates.iter().map(|c| c.2).collect();
        let best = mock_select(&semantic, &latency, parsed.w1, parsed.w2, parsed.l_th)
            .ok_or_else(|| LlmError::Unsupported("route prompt lists no candidates".into()))?;
        Ok(format!("SELECTED: {}", parsed.candidates[best].0))
    }

    fn rewrite(&self, req: &GenerationRequest) -> Result<String, LlmError> {
        let op = req
            .system_text
            .lines()
            .find_map(|l| l.strip_prefix("OPERATION: "))
            .ok_or_else(|| LlmError::Unsupported("rewrite prompt has no OPERATION line".into()))?;
        let words: Vec<&str> = op.split_whitespace().collect();
        let fields = prompt_fields(&req.user_text);
        let template = TemplateRewriter;
        let bad = |what: &str| LlmError::Unsupported(format!("rewrite prompt: {what}"));
        let result = match words.as_slice() {
            ["clear_query"] => {
                let spec = spec_from_fields(&fields).ok_or_else(|| bad("incomplete tool fields"))?;
                template.clear_query(&spec)
            }
            ["ambiguity", kind] => {
                let kind = AmbiguityType::parse(kind).ok_or_else(|| bad("unknown ambiguity type"))?;
                let spec = spec_from_fields(&fields).ok_or_else(|| bad("incomplete tool fields"))?;
                let variant = fields.get("VARIANT").and_then(|v| v.parse().ok()).unwrap_or(0);
                let clear = fields.get("CLEAR_QUERY").cloned().unwrap_or_default();
                template.ambiguate(&spec, &clear, kind, variant)
            }
            ["tone", tone, intensity] => {
                let tone = Tone::parse(tone).ok_or_else(|| bad("unknown tone"))?;
                let intensity: f64 = intensity.parse().map_err(|_| bad("bad intensity"))?;
                template.apply_tone(&req.user_text, tone, intensity)
            }
            _ => return Err(bad(&format!("unknown operation {op:?}"))),
        };
        result.map_err(|e| LlmError::Unsupported(e.to_string()))
    }

    fn profile_update(&self, req: &GenerationRequest) -> Result<String, LlmError> {
        let parsed = parse_profile_prompt(&req.user_text)
            .ok_or_else(|| LlmError::Unsupported("profile prompt is missing a section".into()))?;
        let view = AgentProfileView::new("mock", parsed.w1, parsed.w2);
        let next = apply_update_rule(
            &view,
            detect_tone(&parsed.query_text),
            parsed.success,
            self.profile_delta,
        );
        Ok(render_profile_reply(&ProfileReply {
            notes: next.preference_notes,
            d_w1: next.est_w1 - parsed.w1,
            d_w2: next.est_w2 - parsed.w2,
        }))
    }
}

impl TextGenerator for MockLlm {
    fn generate(&self, request: &GenerationRequest) -> Result<GenerationResponse, LlmError> {
        request.validate()?;
        let text = match request.tag {
            RequestTag::Refine => self.refine_or_categorise(request)?,
            RequestTag::Route => self.route(request)?,
            RequestTag::Rewrite => self.rewrite(request)?,
            RequestTag::ProfileUpdate => self.profile_update(request)?,
        };
        Ok(GenerationResponse {
            prompt_tokens: word_count(&request.system_text) + word_count(&request.user_text),
            completion_tokens: word_count(&text),
            text,
            backend: Backend::Mock,
            latency_ms: 0.0,
        })
    }

    fn backend(&self) -> Backend {
        Backend::Mock
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::routing::prompt::{category_system, REFINE_SYSTEM};

    #[test]
    fn refine_reply() {
        let req = GenerationRequest::new(
            RequestTag::Refine,
            REFINE_SYSTEM,
            "Just find me some Italian restaurants already!",
        )
        .unwrap();
        let text = MockLlm::builtin().generate(&req).unwrap().text;
        assert!(text.contains("restaurant search"), "{text}");
    }

    #[test]
    fn category_without_docs_picks_first() {
        let req = GenerationRequest::new(RequestTag::Refine, category_system(&["flight", "weather"]), "rain").unwrap();
        assert_eq!(MockLlm::builtin().generate(&req).unwrap().text, "flight");
    }

    #[test]
    fn unknown_rewrite_operation() {
        let req = GenerationRequest::new(RequestTag::Rewrite, "OPERATION: dance", "x").unwrap();
        assert!(matches!(
            MockLlm::builtin().generate(&req),
            Err(LlmError::Unsupported(_))
        ));
    }

    #[test]
    fn profile_reply_matches_rule() {
        let view = AgentProfileView::new("u", 5.0, 5.0);
        let (sys, user) = crate::routing::prompt::render_profile_prompt(&view, "Just find it already!", true, 1.0, 0.5);
        let req = GenerationRequest::new(RequestTag::ProfileUpdate, sys, user).unwrap();
        let text = MockLlm::builtin().generate(&req).unwrap().text;
        let reply = crate::routing::prompt::parse_profile_reply(&text).unwrap();
        assert_eq!((reply.d_w1, reply.d_w2), (0.5, 0.0));
    }
}
