use std::fmt;

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::profile::{Category, UserProfile, UserType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AmbiguityType {
    ReferenceAmbiguity,
    InformationMissing,
    TerminologyInaccuracy,
    MultiIntentMixing,
}

impl AmbiguityType {
    pub const ALL: [AmbiguityType; 4] = [
        AmbiguityType::ReferenceAmbiguity,
        AmbiguityType::InformationMissing,
        AmbiguityType::TerminologyInaccuracy,
        AmbiguityType::MultiIntentMixing,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            AmbiguityType::ReferenceAmbiguity => "reference_ambiguity",
            AmbiguityType::InformationMissing => "information_missing",
            AmbiguityType::TerminologyInaccuracy => "terminology_inaccuracy",
            AmbiguityType::MultiIntentMixing => "multi_intent_mixing",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.as_str() == s)
    }
}

impl fmt::Display for AmbiguityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tone {
    DemandingUrgent,
    FrustratedAngry,
    MethodicalObsessive,
    CasualIndifferent,
}

impl Tone {
    pub const ALL: [Tone; 4] = [
        Tone::DemandingUrgent,
        Tone::FrustratedAngry,
        Tone::MethodicalObsessive,
        Tone::CasualIndifferent,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Tone::DemandingUrgent => "demanding_urgent",
            Tone::FrustratedAngry => "frustrated_angry",
            Tone::MethodicalObsessive => "methodical_obsessive",
            Tone::CasualIndifferent => "casual_indifferent",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.as_str() == s)
    }

    /// Phrase that opens every rewrite in this tone.
    pub fn opener(&self) -> &'static str {
        match self {
            Tone::DemandingUrgent => "I need this EXACTLY right, NOW! ",
            Tone::FrustratedAngry => "Just ",
            Tone::MethodicalObsessive => "I need to know EVERY detail. ",
            Tone::CasualIndifferent => "Meh, ",
        }
    }

    /// Closing markers; intensity decides how many are used. The first one
    /// is always present and is what `detect_tone` keys on.
    pub fn closers(&self) -> &'static [&'static str] {
        match self {
            Tone::DemandingUrgent => &["Don't mess this up!", "No excuses!", "Every second counts!"],
            Tone::FrustratedAngry => &[
                "already!",
                "Are you even trying?",
                "This is unacceptable!",
                "How hard can this be?",
            ],
            Tone::MethodicalObsessive => &[
                "Leave nothing out.",
                "Be thorough, everything.",
                "Walk me through it step by step.",
            ],
            Tone::CasualIndifferent => &["Whatever works.", "I guess.", "Not a big deal anyway."],
        }
    }
}

impl fmt::Display for Tone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

const HIGH_WEIGHT: u8 = 6;

/// Tone from the weight pair: a weight counts as high from 6 upward.
pub fn tone_for(w1: u8, w2: u8) -> Tone {
    match (w1 >= HIGH_WEIGHT, w2 >= HIGH_WEIGHT) {
        (true, true) => Tone::DemandingUrgent,
        (true, false) => Tone::FrustratedAngry,
        (false, true) => Tone::MethodicalObsessive,
        (false, false) => Tone::CasualIndifferent,
    }
}

/// Recognises the markers written by the template tone rewriter.
pub fn detect_tone(text: &str) -> Option<Tone> {
    let lower = text.to_lowercase();
    if lower.contains("exactly right, now!") || lower.contains("don't mess this up") {
        Some(Tone::DemandingUrgent)
    } else if lower.contains("already!") || lower.contains("are you even trying") || lower.contains("unacceptable") {
        Some(Tone::FrustratedAngry)
    } else if lower.contains("every detail") || lower.contains("leave nothing out") {
        Some(Tone::MethodicalObsessive)
    } else if lower.starts_with("meh,") || lower.contains("whatever works") {
        Some(Tone::CasualIndifferent)
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryRecord {
    pub query_id: String,
    pub user_id: String,
    pub topic: String,
    pub ground_truth_tool: String,
    pub clear_text: String,
    pub ambiguous_text: String,
    pub final_text: String,
    pub ambiguity_type: Option<AmbiguityType>,
    pub tone: Tone,
    pub emotional_intensity: f64,
}

pub fn query_id(user_id: &str, index: usize) -> String {
    format!("{user_id}-q{index:03}")
}

/// Everything a rewriter needs to phrase one clear query.
#[derive(Debug, Clone, PartialEq)]
pub struct ClearQuerySpec {
    pub user_type: UserType,
    pub topic: String,
    pub tool_id: String,
    pub tool_name: String,
    pub tool_description: String,
    pub slots: Vec<String>,
    pub complexity: u8,
}

/// First sentence of a tool description, lowercased, without the period.
pub fn intent_phrase(description: &str) -> String {
    let first = description.split('.').next().unwrap_or(description).trim();
    let mut chars = first.chars();
    match chars.next() {
        Some(c) => c.to_lowercase().chain(chars).collect(),
        None => String::new(),
    }
}

pub const VERIFICATION: &str = ", and please verify everything thoroughly";

const CITIES: &[&str] = &[
    "Lisbon", "Denver", "Osaka", "Nairobi", "Toronto", "Madrid", "Hanoi", "Oslo", "Austin", "Perth", "Lyon", "Seoul",
];
const DATES: &[&str] = &[
    "June 3",
    "next Friday",
    "March 14",
    "this weekend",
    "October 21",
    "tomorrow morning",
    "December 2",
    "the first week of May",
];
const PEOPLE: &[&str] = &[
    "my mother",
    "my son",
    "a 40 year old",
    "my partner",
    "my grandfather",
    "myself",
];
const FOLDERS: &[&str] = &[
    "the Documents folder",
    "my project folder",
    "the Downloads folder",
    "the shared drive",
];
const WEEKDAYS: &[&str] = &["Monday", "yesterday", "last week", "this morning"];

/// Slot phrases for one topic; speed-first users give one, everyone else two.
pub fn draw_slots<R: Rng + ?Sized>(topic: &str, category: Category, rng: &mut R) -> Vec<String> {
    let pick = |rng: &mut R, xs: &[&str]| xs.choose(rng).copied().unwrap_or_default().to_string();
    let mut slots = match topic {
        "flight" => {
            let from = pick(rng, CITIES);
            let mut to = pick(rng, CITIES);
            while to == from {
                to = pick(rng, CITIES);
            }
            vec![format!("from {from} to {to}"), format!("on {}", pick(rng, DATES))]
        }
        "healthcare" => vec![format!("for {}", pick(rng, PEOPLE)), format!("by {}", pick(rng, DATES))],
        "desktop" => vec![
            format!("in {}", pick(rng, FOLDERS)),
            format!("since {}", pick(rng, WEEKDAYS)),
        ],
        _ => vec![format!("in {}", pick(rng, CITIES)), format!("for {}", pick(rng, DATES))],
    };
    if category.complexity() == 1 {
        slots.truncate(1);
    }
    slots
}

pub fn spec_for(
    profile: &UserProfile,
    topic: &str,
    tool: &crate::retrieval::ToolDescriptor,
    slots: Vec<String>,
) -> ClearQuerySpec {
    ClearQuerySpec {
        user_type: profile.user_type,
        topic: topic.to_string(),
        tool_id: tool.tool_id.clone(),
        tool_name: tool.name.clone(),
        tool_description: tool.description.clone(),
        slots,
        complexity: profile.category.complexity(),
    }
}
