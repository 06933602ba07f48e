#![allow(dead_code)]

use std::collections::BTreeMap;

use qoe_route::harness::{NetworkKind, PredictorConfig, ProfileConfig, Scenario, ScenarioConfig, TopicConfig};
use qoe_route::llm::Backend;
use qoe_route::netsim::{FailureModel, LatencyPattern, PatternKind};
use qoe_route::retrieval::{MatchParams, ServerDescriptor, ToolDescriptor};
use qoe_route::routing::PolicyKind;
use qoe_route::trip::{Category, Dataset, DatasetOptions, QueryRecord, Tone, UserProfile, UserType};

pub const TOPIC: &str = "travel";

fn tool(server: &str, name: &str, description: &str) -> ToolDescriptor {
    ToolDescriptor {
        tool_id: format!("{server}.{name}"),
        server_id: server.to_string(),
        name: name.to_string(),
        description: description.to_string(),
    }
}

fn server(id: &str, description: &str, tools: &[&str]) -> ServerDescriptor {
    ServerDescriptor {
        server_id: id.to_string(),
        topic: TOPIC.to_string(),
        description: description.to_string(),
        tool_ids: tools.iter().map(|t| format!("{id}.{t}")).collect(),
        is_real: false,
        pattern_id: format!("p-{id}"),
    }
}

/// Noise-free pattern with perfect link stability.
fn flat(id: &str, base: f64) -> LatencyPattern {
    let mut p = LatencyPattern::preset(format!("p-{id}"), PatternKind::StableNormal, base).with_variance(0.0);
    p.stability = 1.0;
    p
}

/// Two servers, four tools, one topic, deterministic latencies (1 s and
/// 2 s network, 0.2 s execution) and no failures.
pub fn tiny_config() -> ScenarioConfig {
    ScenarioConfig {
        name: "tiny".into(),
        network: NetworkKind::Custom,
        topics: vec![TopicConfig {
            name: TOPIC.into(),
            base_latency_s: 1.0,
            l_th: 2.0,
            q_max: 1.0,
        }],
        servers: vec![
            server(
                "flights",
                "Airline desk: book a flight ticket and check flight status.",
                &["book_flight", "flight_status"],
            ),
            server(
                "hotels",
                "Hotel desk: reserve a hotel room and read hotel reviews.",
                &["reserve_room", "hotel_reviews"],
            ),
        ],
        tools: vec![
            tool("flights", "book_flight", "Book a flight ticket. Seat, fare, passenger."),
            tool(
                "flights",
                "flight_status",
                "Check flight status. Gate, delay, departure.",
            ),
            tool("hotels", "reserve_room", "Reserve a hotel room. Nights, guests, rate."),
            tool(
                "hotels",
                "hotel_reviews",
                "Read hotel reviews. Ratings, guest comments.",
            ),
        ],
        patterns: vec![flat("flights", 1.0), flat("hotels", 2.0)],
        retrieval: MatchParams::default(),
        predictor: PredictorConfig::default(),
        failure: FailureModel {
            timeout_s: None,
            tau_net_s: None,
            exec_median_s: 0.2,
            exec_sigma: 0.0,
            exec_median_overrides: BTreeMap::new(),
        },
        policies: PolicyKind::ALL.to_vec(),
        seeds: vec![1, 2],
        dataset: DatasetOptions {
            num_users: 1,
            queries_per_user: 20,
            seed: 5,
            ambiguity: true,
            tone: true,
        },
        horizon: 20,
        backend: Backend::Mock,
        profile: ProfileConfig::default(),
    }
}

pub fn tiny_scenario() -> Scenario {
    Scenario::new(tiny_config()).expect("fixture scenario is valid")
}

pub fn profile(user_id: &str, user_type: UserType, w1: u8, w2: u8) -> UserProfile {
    UserProfile {
        user_id: user_id.into(),
        user_type,
        category: user_type.category(),
        w1,
        w2,
        topic_id: 0,
        description: format!("{user_type} fixture user"),
    }
}

pub fn query(user_id: &str, index: usize, ground_truth: &str, text: &str) -> QueryRecord {
    QueryRecord {
        query_id: format!("{user_id}-q{index:03}"),
        user_id: user_id.into(),
        topic: TOPIC.into(),
        ground_truth_tool: ground_truth.into(),
        clear_text: text.into(),
        ambiguous_text: text.into(),
        final_text: text.into(),
        ambiguity_type: None,
        tone: Tone::CasualIndifferent,
        emotional_intensity: 0.5,
    }
}

/// Hand-written dataset: one balanced user, 20 queries alternating between
/// a clear request for `book_flight` and a request for `hotel_reviews`
/// whose wording shares no token with any tool description.
pub fn half_ambiguous_dataset() -> Dataset {
    let user = "user_001";
    let queries = (0..20)
        .map(|i| {
            if i % 2 == 0 {
                query(user, i, "flights.book_flight", "book a flight ticket")
            } else {
                query(user, i, "hotels.hotel_reviews", "what did people say about it")
            }
        })
        .collect();
    Dataset {
        seed: 0,
        topics: vec![TOPIC.into()],
        profiles: vec![profile(user, UserType::Practical, 5, 5)],
        queries,
    }
}

pub fn category_of(user_type: UserType) -> Category {
    user_type.category()
}
