//! Text-generation gateway: one request/response shape shared by a
//! deterministic offline mock and an HTTP client for OpenAI-compatible
//! chat-completion endpoints.

mod http;
mod mock;

use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use http::{HttpConfig, HttpLlm};
pub use mock::MockLlm;

#[derive(Debug, Error)]
pub enum LlmError {
    #[error("request timed out after {0:?}")]
    Timeout(Duration),
    #[error("HTTP status {status}: {body}")]
    Status { status: u16, body: String },
    #[error("malformed response body: {0}")]
    MalformedBody(String),
    #[error("transport error: {0}")]
    Transport(String),
    #[error("gave up after {attempts} attempts, last error: {last}")]
    RetriesExhausted { attempts: u32, last: Box<LlmError> },
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("mock backend cannot answer: {0}")]
    Unsupported(String),
}

impl LlmError {
    /// Timeouts, transport failures, throttling and server errors.
    pub fn is_retryable(&self) -> bool {
        match self {
            LlmError::Timeout(_) | LlmError::Transport(_) => true,
            LlmError::Status { status, .. } => *status == 429 || *status >= 500,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RequestTag {
    Refine,
    Route,
    Rewrite,
    ProfileUpdate,
}

impl RequestTag {
    fn default_temperature(&self) -> f64 {
        match self {
            RequestTag::Rewrite => 0.7,
            _ => 0.0,
        }
    }

    fn default_max_tokens(&self) -> u32 {
        match self {
            RequestTag::Refine => 64,
            RequestTag::Route => 32,
            RequestTag::Rewrite => 160,
            RequestTag::ProfileUpdate => 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    #[default]
    Mock,
    Http,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Mock => "mock",
            Backend::Http => "http",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationRequest {
    pub tag: RequestTag,
    pub system_text: String,
    pub user_text: String,
    pub max_tokens: u32,
    pub temperature: f64,
}

impl GenerationRequest {
    pub fn new(
        tag: RequestTag,
        system_text: impl Into<String>,
        user_text: impl Into<String>,
    ) -> Result<Self, LlmError> {
        let req = Self {
            tag,
            system_text: system_text.into(),
            user_text: user_text.into(),
            max_tokens: tag.default_max_tokens(),
            temperature: tag.default_temperature(),
        };
        req.validate()?;
        Ok(req)
    }

    pub fn validate(&self) -> Result<(), LlmError> {
        if self.user_text.trim().is_empty() {
            return Err(LlmError::InvalidRequest("user text is empty".into()));
        }
        if self.max_tokens == 0 {
            return Err(LlmError::InvalidRequest("max_tokens must be positive".into()));
        }
        if !(0.0..=2.0).contains(&self.temperature) {
            return Err(LlmError::InvalidRequest(format!(
                "temperature {} outside [0, 2]",
                self.temperature
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationResponse {
    pub text: String,
    pub backend: Backend,
    pub latency_ms: f64,
    pub prompt_tokens: u32,
    pub completion_tokens: u32,
}

pub trait TextGenerator: Send + Sync {
    fn generate(&self, request: &GenerationRequest) -> Result<GenerationResponse, LlmError>;

    fn backend(&self) -> Backend;
}

pub(crate) fn word_count(text: &str) -> u32 {
    text.split_whitespace().count() as u32
}
