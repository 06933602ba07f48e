use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::TripError;
use crate::rng::{domain, substream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    SpeedFirst,
    AccuracyFirst,
    Balanced,
    Special,
}

impl Category {
    pub const ALL: [Category; 4] = [
        Category::SpeedFirst,
        Category::AccuracyFirst,
        Category::Balanced,
        Category::Special,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Category::SpeedFirst => "speed_first",
            Category::AccuracyFirst => "accuracy_first",
            Category::Balanced => "balanced",
            Category::Special => "special",
        }
    }

    /// Centre of the weight box spanned by the category's member types.
    pub fn midpoint(&self) -> (f64, f64) {
        let members: Vec<UserType> = UserType::ALL.into_iter().filter(|t| t.category() == *self).collect();
        let w1_lo = members.iter().map(|t| t.w1_range().0).min().unwrap_or(1);
        let w1_hi = members.iter().map(|t| t.w1_range().1).max().unwrap_or(10);
        let w2_lo = members.iter().map(|t| t.w2_range().0).min().unwrap_or(1);
        let w2_hi = members.iter().map(|t| t.w2_range().1).max().unwrap_or(10);
        (f64::from(w1_lo + w1_hi) / 2.0, f64::from(w2_lo + w2_hi) / 2.0)
    }

    pub fn opposite(&self) -> Category {
        match self {
            Category::SpeedFirst => Category::AccuracyFirst,
            Category::AccuracyFirst => Category::SpeedFirst,
            Category::Balanced => Category::Special,
            Category::Special => Category::Balanced,
        }
    }

    /// Query complexity level used by the clear-query template.
    pub fn complexity(&self) -> u8 {
        match self {
            Category::SpeedFirst => 1,
            Category::Balanced | Category::Special => 2,
            Category::AccuracyFirst => 3,
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UserType {
    Impulsive,
    Efficient,
    Meticulous,
    Technical,
    Analytical,
    Practical,
    Casual,
    Emergency,
    HighPressure,
}

impl UserType {
    pub const ALL: [UserType; 9] = [
        UserType::Impulsive,
        UserType::Efficient,
        UserType::Meticulous,
        UserType::Technical,
        UserType::Analytical,
        UserType::Practical,
        UserType::Casual,
        UserType::Emergency,
        UserType::HighPressure,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            UserType::Impulsive => "impulsive",
            UserType::Efficient => "efficient",
            UserType::Meticulous => "meticulous",
            UserType::Technical => "technical",
            UserType::Analytical => "analytical",
            UserType::Practical => "practical",
            UserType::Casual => "casual",
            UserType::Emergency => "emergency",
            UserType::HighPressure => "high_pressure",
        }
    }

    pub fn category(&self) -> Category {
        match self {
            UserType::Impulsive | UserType::Efficient => Category::SpeedFirst,
            UserType::Meticulous | UserType::Technical | UserType::Analytical => Category::AccuracyFirst,
            UserType::Practical | UserType::Casual => Category::Balanced,
            UserType::Emergency | UserType::HighPressure => Category::Special,
        }
    }

    /// Inclusive range of the waiting-time sensitivity.
    pub fn w1_range(&self) -> (u8, u8) {
        match self {
            UserType::Impulsive => (9, 10),
            UserType::Efficient => (7, 9),
            UserType::Meticulous => (1, 4),
            UserType::Technical => (4, 6),
            UserType::Analytical => (5, 7),
            UserType::Practical => (4, 7),
            UserType::Casual => (3, 5),
            UserType::Emergency => (10, 10),
            UserType::HighPressure => (9, 10),
        }
    }

    /// Inclusive range of the task-satisfaction weight.
    pub fn w2_range(&self) -> (u8, u8) {
        match self {
            UserType::Impulsive => (2, 4),
            UserType::Efficient => (5, 7),
            UserType::Meticulous => (8, 10),
            UserType::Technical => (7, 9),
            UserType::Analytical => (9, 10),
            UserType::Practical => (4, 7),
            UserType::Casual => (3, 5),
            UserType::Emergency => (6, 8),
            UserType::HighPressure => (9, 10),
        }
    }

    /// Rough waiting-time tolerance in seconds, used in profile descriptions.
    pub fn tolerance_s(&self) -> f64 {
        match self {
            UserType::Impulsive | UserType::Emergency => 1.0,
            UserType::Efficient | UserType::HighPressure => 2.0,
            UserType::Practical | UserType::Technical => 5.0,
            UserType::Analytical | UserType::Casual => 8.0,
            UserType::Meticulous => 15.0,
        }
    }

    pub fn persona(&self) -> &'static str {
        match self {
            UserType::Impulsive => "makes rapid decisions with minimal verification",
            UserType::Efficient => "wants quick answers that are still correct",
            UserType::Meticulous => "checks every detail and accepts long waits for accuracy",
            UserType::Technical => "expects precise, technically complete results",
            UserType::Analytical => "compares options carefully before acting",
            UserType::Practical => "wants a workable answer without fuss",
            UserType::Casual => "browses without strong expectations",
            UserType::Emergency => "is in an emergency and needs an answer immediately",
            UserType::HighPressure => "works under a deadline and needs answers both fast and right",
        }
    }

    /// Clear-query opener; keeps each type's phrasing recognisable.
    pub fn opener(&self) -> &'static str {
        match self {
            UserType::Impulsive => "Quick, ",
            UserType::Efficient => "Please ",
            UserType::Meticulous => "I would like you to ",
            UserType::Technical => "Precisely ",
            UserType::Analytical => "For my analysis, ",
            UserType::Practical => "Can you ",
            UserType::Casual => "Hey, ",
            UserType::Emergency => "Urgently ",
            UserType::HighPressure => "Right now, ",
        }
    }
}

impl fmt::Display for UserType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for UserType {
    type Err = TripError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        UserType::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| TripError::UnknownUserType(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserProfile {
    pub user_id: String,
    pub user_type: UserType,
    pub category: Category,
    /// Waiting-time sensitivity, an integer in 1..=10.
    pub w1: u8,
    /// Task-satisfaction weight, an integer in 1..=10.
    pub w2: u8,
    pub topic_id: usize,
    pub description: String,
}

impl UserProfile {
    pub fn violations(&self, path: &str) -> Vec<String> {
        let mut out = Vec::new();
        if self.category != self.user_type.category() {
            out.push(format!(
                "{path}.category: {} does not match user type {}",
                self.category, self.user_type
            ));
        }
        let (lo1, hi1) = self.user_type.w1_range();
        if !(lo1..=hi1).contains(&self.w1) {
            out.push(format!(
                "{path}.w1: {} outside [{lo1}, {hi1}] for {}",
                self.w1, self.user_type
            ));
        }
        let (lo2, hi2) = self.user_type.w2_range();
        if !(lo2..=hi2).contains(&self.w2) {
            out.push(format!(
                "{path}.w2: {} outside [{lo2}, {hi2}] for {}",
                self.w2, self.user_type
            ));
        }
        out
    }
}

pub fn user_id(index: usize) -> String {
    format!("user_{index:03}")
}

fn describe(user_type: UserType, w1: u8, w2: u8, topic: &str) -> String {
    format!(
        "{} user who {}. Tolerates about {} s of waiting. Waiting-time sensitivity {}/10, \
         task-satisfaction weight {}/10. Mostly asks about {}.",
        capitalize(user_type.as_str()),
        user_type.persona(),
        user_type.tolerance_s(),
        w1,
        w2,
        topic
    )
}

fn capitalize(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect::<String>().replace('_', "-"),
        None => String::new(),
    }
}

/// Topic index of the 1-based user `i`: users cycle through the topics once,
/// and everyone beyond the first pass shares topic 0.
pub fn topic_index_for(i: usize, num_topics: usize) -> usize {
    if i > num_topics {
        0
    } else {
        (i - 1) % num_topics
    }
}

/// Builds `num_users` profiles. Each user draws a type not yet used on its
/// topic, then integer weights uniformly inside that type's ranges.
pub fn generate_profiles(num_users: usize, topics: &[String], seed: u64) -> Result<Vec<UserProfile>, TripError> {
    if topics.is_empty() {
        return Err(TripError::NoTopics);
    }
    let mut used: Vec<Vec<UserType>> = vec![Vec::new(); topics.len()];
    let mut rng = substream(seed, &[domain::PROFILES]);
    let mut profiles = Vec::with_capacity(num_users);
    for i in 1..=num_users {
        let topic = topic_index_for(i, topics.len());
        let available: Vec<UserType> = UserType::ALL.into_iter().filter(|t| !used[topic].contains(t)).collect();
        if available.is_empty() {
            return Err(TripError::TopicCapacity {
                topic: topics[topic].clone(),
                capacity: UserType::ALL.len(),
            });
        }
        let user_type = available[rng.random_range(0..available.len())];
        used[topic].push(user_type);
        let w1 = draw(&mut rng, user_type.w1_range());
        let w2 = draw(&mut rng, user_type.w2_range());
        profiles.push(UserProfile {
            user_id: user_id(i),
            user_type,
            category: user_type.category(),
            w1,
            w2,
            topic_id: topic,
            description: describe(user_type, w1, w2, &topics[topic]),
        });
    }
    Ok(profiles)
}

fn draw<R: Rng + ?Sized>(rng: &mut R, (lo, hi): (u8, u8)) -> u8 {
    rng.random_range(lo..=hi)
}
