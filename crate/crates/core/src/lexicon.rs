//! Vocabulary shared by the template rewriter and the mock language model:
//! canonical terms paired with the colloquial phrasing users substitute for
//! them, filler words, and intents that live outside the tool registry.

use std::collections::BTreeSet;

use crate::retrieval::{tokenize, Registry};

/// `(canonical, colloquial)` pairs. Matching is on token sequences and the
/// longest canonical phrase wins.
pub const COLLOQUIAL: &[(&str, &str)] = &[
    ("vacation rental", "holiday pad"),
    ("listings", "places up"),
    ("listing", "ad"),
    ("hotels", "places to crash"),
    ("hotel", "place to crash"),
    ("reservation", "booking thingy"),
    ("hostels", "bunk spots"),
    ("hostel", "bunk spot"),
    ("campgrounds", "outdoor sleeping spots"),
    ("campsite", "tent spot"),
    ("serviced apartments", "furnished pads"),
    ("wheelchair accessible", "easy to get around"),
    ("pet friendly", "ok with my doggo"),
    ("drug information", "pill stuff"),
    ("drug interactions", "pill mixing"),
    ("medication", "meds"),
    ("symptoms", "feeling off"),
    ("clinics", "doc places"),
    ("clinic", "doc place"),
    ("pharmacy", "drugstore"),
    ("prescription", "script"),
    ("doctor appointment", "doc visit"),
    ("nutrition facts", "what is in my food"),
    ("meal plan", "eating schedule"),
    ("vaccination", "shots"),
    ("vaccines", "jabs"),
    ("therapist", "someone to talk to"),
    ("breathing exercise", "calm down routine"),
    ("flights", "plane rides"),
    ("flight", "plane"),
    ("airfare", "ticket cost"),
    ("fares", "plane prices"),
    ("seat", "spot on board"),
    ("airport", "air station"),
    ("baggage", "stuff i packed"),
    ("aircraft", "plane up there"),
    ("frequent flyer", "loyalty thing"),
    ("miles", "points"),
    ("file", "doc thing"),
    ("files", "doc things"),
    ("directory", "place where stuff is"),
    ("ram usage", "computer memory is full"),
    ("memory", "brain space"),
    ("cpu load", "chip busy"),
    ("disk space", "room on my computer"),
    ("screenshot", "screen picture"),
    ("record the screen", "film my monitor"),
    ("application", "program"),
    ("clipboard", "copy thing"),
    ("email", "mail thing"),
    ("inbox", "mailbox"),
    ("weather forecast", "sky outlook"),
    ("forecast", "outlook"),
    ("weather", "sky stuff"),
    ("hourly", "hour by hour"),
    ("precipitation", "wet stuff"),
    ("severe weather alerts", "scary sky heads ups"),
    ("hurricane", "big storm"),
    ("air quality index", "how dirty the air is"),
    ("pollen", "sneezy stuff"),
    ("marine", "boat"),
    ("tide", "water level"),
    ("historical weather", "old sky records"),
    ("climate averages", "usual temps"),
    ("uv index", "sun burn level"),
    ("sunrise", "when the sun comes up"),
];

/// Intents users ask for that no registry tool serves; the refiner still
/// names them so downstream matching sees the real request.
pub const INTENT_EXTRAS: &[(&str, &str)] = &[
    ("restaurants", "restaurant search"),
    ("restaurant", "restaurant search"),
    ("sushi", "restaurant search"),
    ("pizza", "food delivery"),
    ("menu", "restaurant menu"),
    ("jazz", "music playback"),
    ("translate", "translation"),
];

/// Filler, pronouns and emotional markers with no functional content.
pub const STOP_WORDS: &[&str] = &[
    "a",
    "about",
    "again",
    "all",
    "already",
    "also",
    "am",
    "an",
    "and",
    "any",
    "anyway",
    "are",
    "as",
    "at",
    "be",
    "been",
    "big",
    "but",
    "by",
    "can",
    "check",
    "could",
    "deal",
    "do",
    "does",
    "doing",
    "don",
    "even",
    "every",
    "everything",
    "exactly",
    "excuses",
    "for",
    "from",
    "get",
    "give",
    "go",
    "guess",
    "hard",
    "has",
    "have",
    "hey",
    "how",
    "i",
    "if",
    "in",
    "into",
    "is",
    "it",
    "just",
    "know",
    "leave",
    "let",
    "like",
    "me",
    "meh",
    "mess",
    "my",
    "need",
    "no",
    "not",
    "nothing",
    "now",
    "of",
    "ok",
    "on",
    "or",
    "out",
    "please",
    "precisely",
    "quick",
    "quickly",
    "right",
    "s",
    "second",
    "seconds",
    "so",
    "some",
    "something",
    "t",
    "than",
    "that",
    "the",
    "thing",
    "this",
    "through",
    "to",
    "trying",
    "unacceptable",
    "up",
    "urgently",
    "want",
    "what",
    "whatever",
    "when",
    "where",
    "which",
    "who",
    "will",
    "with",
    "works",
    "would",
    "you",
    "your",
    "counts",
    "step",
    "thorough",
    "walk",
    "detail",
    "verify",
    "thoroughly",
    "analysis",
    "would",
    "like",
    "anyway",
    "hungry",
    "kind",
    "sort",
];

pub fn is_stop_word(token: &str) -> bool {
    STOP_WORDS.contains(&token)
}

/// Replaces the first longest match of any `from` phrase at each position.
fn replace_sequences(tokens: &[String], pairs: &[(Vec<String>, Vec<String>)]) -> (Vec<String>, bool) {
    let mut out = Vec::with_capacity(tokens.len());
    let mut changed = false;
    let mut i = 0;
    while i < tokens.len() {
        let best = pairs
            .iter()
            .filter(|(from, _)| tokens[i..].starts_with(from))
            .max_by_key(|(from, _)| from.len());
        match best {
            Some((from, to)) => {
                out.extend(to.iter().cloned());
                i += from.len();
                changed = true;
            }
            None => {
                out.push(tokens[i].clone());
                i += 1;
            }
        }
    }
    (out, changed)
}

fn tokenized_pairs(pairs: &[(&str, &str)], reverse: bool) -> Vec<(Vec<String>, Vec<String>)> {
    pairs
        .iter()
        .map(|&(a, b)| {
            let (from, to) = if reverse { (b, a) } else { (a, b) };
            (tokenize(from), tokenize(to))
        })
        .collect()
}

/// Swaps canonical terms in `text` for their colloquial counterparts.
/// Returns `None` when nothing matched. Output is lowercase.
pub fn colloquialize(text: &str) -> Option<String> {
    let (out, changed) = replace_sequences(&tokenize(text), &tokenized_pairs(COLLOQUIAL, false));
    changed.then(|| out.join(" "))
}

/// Vocabulary-aware keyword extractor used by the mock refiner and the mock
/// category predictor.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    vocabulary: Option<BTreeSet<String>>,
    /// `(topic, tokens)` documents for category prediction.
    topic_docs: Vec<(String, Vec<String>)>,
}

impl Lexicon {
    /// Lexicon with no registry vocabulary: every non-filler token survives.
    pub fn builtin() -> Self {
        Self::default()
    }

    pub fn from_registry(registry: &Registry) -> Self {
        let mut vocab = BTreeSet::new();
        for s in registry.servers() {
            vocab.extend(tokenize(&s.description));
            vocab.extend(tokenize(&s.topic));
        }
        for t in registry.tools() {
            vocab.extend(tokenize(&t.description));
            vocab.extend(tokenize(&t.name));
        }
        for (_, phrase) in INTENT_EXTRAS {
            vocab.extend(tokenize(phrase));
        }
        let topic_docs = registry
            .topics()
            .into_iter()
            .map(|topic| {
                let mut doc = tokenize(topic);
                for s in registry.servers().iter().filter(|s| s.topic == topic) {
                    doc.extend(tokenize(&s.description));
                }
                (topic.to_string(), doc)
            })
            .collect();
        Self {
            vocabulary: Some(vocab),
            topic_docs,
        }
    }

    pub fn topic_docs(&self) -> &[(String, Vec<String>)] {
        &self.topic_docs
    }

    /// Keyword extraction: colloquial phrases are mapped back to canonical
    /// terms, out-of-registry intents are named, then filler and slot values
    /// (anything outside the vocabulary) are dropped. Falls back to the raw
    /// text when nothing survives.
    pub fn refine(&self, raw: &str) -> String {
        let tokens = tokenize(raw);
        let (tokens, _) = replace_sequences(&tokens, &tokenized_pairs(COLLOQUIAL, true));
        let (tokens, _) = replace_sequences(&tokens, &tokenized_pairs(INTENT_EXTRAS, false));
        let mut kept: Vec<String> = Vec::new();
        for tok in tokens {
            if is_stop_word(&tok) || tok.chars().all(|c| c.is_ascii_digit()) {
                continue;
            }
            if let Some(v) = &self.vocabulary {
                if !v.contains(&tok) {
                    continue;
                }
            }
            if !kept.contains(&tok) {
                kept.push(tok);
            }
        }
        if kept.is_empty() {
            raw.trim().to_string()
        } else {
            kept.join(" ")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colloquial_longest_match() {
        assert_eq!(
            colloquialize("Get the weather forecast").as_deref(),
            Some("get the sky outlook")
        );
        assert_eq!(colloquialize("nothing relevant here"), None);
    }

    #[test]
    fn refine_names_restaurant_intent() {
        let out = Lexicon::builtin().refine("Just find me some Italian restaurants already!");
        assert!(out.contains("restaurant search"), "{out}");
    }

    #[test]
    fn refine_keeps_minimal_query() {
        assert_eq!(
            Lexicon::builtin().refine("hourly weather forecast"),
            "hourly weather forecast"
        );
    }

    #[test]
    fn refine_reverses_colloquial_terms() {
        let out = Lexicon::builtin().refine("my computer memory is full");
        assert_eq!(out, "ram usage");
    }

    #[test]
    fn refine_falls_back_to_raw() {
        assert_eq!(Lexicon::builtin().refine("  just please  "), "just please");
    }
}
