use super::prompt::{parse_profile_reply, render_profile_prompt};
use super::{AgentProfileView, DecisionMode, WEIGHT_MAX, WEIGHT_MIN};
use crate::llm::{GenerationRequest, RequestTag, TextGenerator};
use crate::trip::{detect_tone, Tone};

pub const DEFAULT_DELTA: f64 = 0.5;
/// Largest per-update change accepted from a live model.
pub const LIVE_MAX_STEP: f64 = 1.0;
const NEUTRAL: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpdateOutcome {
    pub success: bool,
    pub latency_s: f64,
    pub qoe: f64,
}

pub fn describe_weights(w1: f64, w2: f64) -> String {
    match (w1 >= 6.0, w2 >= 6.0) {
        (true, true) => "Wants answers that are both fast and correct.",
        (true, false) => "Prefers fast answers over exhaustive ones.",
        (false, true) => "Prefers the right tool even when it is slower.",
        (false, false) => "No strong preference between speed and accuracy.",
    }
    .to_string()
}

fn toward_neutral(w: f64, delta: f64) -> f64 {
    if w > NEUTRAL {
        (w - delta).max(NEUTRAL)
    } else {
        (w + delta).min(NEUTRAL)
    }
}

fn clamp_weight(w: f64) -> f64 {
    w.clamp(WEIGHT_MIN, WEIGHT_MAX)
}

/// Tone-driven nudges: impatience raises w1, insistence on detail raises
/// w2, indifference decays both toward 5. A failed query for a user who
/// already leans toward accuracy raises w2 further.
pub fn apply_update_rule(view: &AgentProfileView, tone: Option<Tone>, success: bool, delta: f64) -> AgentProfileView {
    let (mut w1, mut w2) = (view.est_w1, view.est_w2);
    match tone {
        Some(Tone::FrustratedAngry) => w1 += delta,
        Some(Tone::DemandingUrgent) => {
            w1 += delta;
            w2 += delta;
        }
        Some(Tone::MethodicalObsessive) => w2 += delta,
        Some(Tone::CasualIndifferent) => {
            w1 = toward_neutral(w1, delta);
            w2 = toward_neutral(w2, delta);
        }
        None => {}
    }
    if !success && view.est_w2 > view.est_w1 {
        w2 += delta;
    }
    let (w1, w2) = (clamp_weight(w1), clamp_weight(w2));
    AgentProfileView {
        user_id: view.user_id.clone(),
        est_w1: w1,
        est_w2: w2,
        preference_notes: describe_weights(w1, w2),
        update_count: view.update_count + 1,
    }
}

/// Updates the estimate after one query. `Live` asks the model for bounded
/// adjustments (one retry, then the rule).
pub fn update_profile(
    view: &AgentProfileView,
    query_text: &str,
    outcome: UpdateOutcome,
    llm: &dyn TextGenerator,
    mode: DecisionMode,
    delta: f64,
) -> AgentProfileView {
    if mode == DecisionMode::Mock {
        return apply_update_rule(view, detect_tone(query_text), outcome.success, delta);
    }
    let (system, user) = render_profile_prompt(view, query_text, outcome.success, outcome.latency_s, outcome.qoe);
    let request = match GenerationRequest::new(RequestTag::ProfileUpdate, system, user) {
        Ok(r) => r,
        Err(e) => {
            log::warn!("profile update request invalid: {e}");
            return apply_update_rule(view, detect_tone(query_text), outcome.success, delta);
        }
    };
    for attempt in 1..=2 {
        match llm.generate(&request) {
            Ok(resp) => {
                if let Some(reply) = parse_profile_reply(&resp.text) {
                    let step = |d: f64| d.clamp(-LIVE_MAX_STEP, LIVE_MAX_STEP);
                    let w1 = clamp_weight(view.est_w1 + step(reply.d_w1));
                    let w2 = clamp_weight(view.est_w2 + step(reply.d_w2));
                    let notes = if reply.notes.is_empty() {
                        describe_weights(w1, w2)
                    } else {
                        reply.notes
                    };
                    return AgentProfileView {
                        user_id: view.user_id.clone(),
                        est_w1: w1,
                        est_w2: w2,
                        preference_notes: notes,
                        update_count: view.update_count + 1,
                    };
                }
                log::warn!("profile reply attempt {attempt} unparseable: {:?}", resp.text);
            }
            Err(e) => log::warn!("profile update attempt {attempt} failed: {e}"),
        }
    }
    apply_update_rule(view, detect_tone(query_text), outcome.success, delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn view(w1: f64, w2: f64) -> AgentProfileView {
        AgentProfileView::new("u", w1, w2)
    }

    #[test]
    fn frustration_saturates_at_ten() {
        let mut v = view(5.0, 5.0);
        for _ in 0..20 {
            v = apply_update_rule(&v, Some(Tone::FrustratedAngry), true, DEFAULT_DELTA);
        }
        assert_eq!(v.est_w1, 10.0);
        assert_eq!(v.est_w2, 5.0);
        assert_eq!(v.update_count, 20);
    }

    #[test]
    fn casual_decays_to_neutral() {
        let mut v = view(9.2, 1.2);
        for _ in 0..20 {
            v = apply_update_rule(&v, Some(Tone::CasualIndifferent), true, DEFAULT_DELTA);
        }
        assert_eq!((v.est_w1, v.est_w2), (5.0, 5.0));
    }

    #[test]
    fn failure_nudges_accuracy_leaning() {
        let v = apply_update_rule(&view(3.0, 7.0), None, false, DEFAULT_DELTA);
        assert_eq!((v.est_w1, v.est_w2), (3.0, 7.5));
        let v = apply_update_rule(&view(7.0, 3.0), None, false, DEFAULT_DELTA);
        assert_eq!((v.est_w1, v.est_w2), (7.0, 3.0));
    }

    proptest! {
        #[test]
        fn rule_stays_in_bounds(w1 in 1.0f64..=10.0, w2 in 1.0f64..=10.0,
                                steps in proptest::collection::vec((0usize..5, any::<bool>()), 0..60),
                                delta in 0.0f64..3.0) {
            let mut v = view(w1, w2);
            for (t, success) in steps {
                let tone = Tone::ALL.get(t).copied();
                v = apply_update_rule(&v, tone, success, delta);
                prop_assert!((1.0..=10.0).contains(&v.est_w1));
                prop_assert!((1.0..=10.0).contains(&v.est_w2));
            }
        }
    }
}
