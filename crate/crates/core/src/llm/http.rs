use std::fmt;
use std::sync::{Condvar, Mutex};
use std::thread;
use std::time::{Duration, Instant};

use serde_json::{json, Value};
use ureq::Agent;

use super::{word_count, Backend, GenerationRequest, GenerationResponse, LlmError, TextGenerator};

#[derive(Clone)]
pub struct HttpConfig {
    /// Base URL of an OpenAI-compatible API, e.g. `https://host/v1`.
    pub base_url: String,
    pub api_key: Option<String>,
    pub model: String,
    pub timeout: Duration,
    /// Extra attempts after the first one.
    pub max_retries: u32,
    pub backoff_base: Duration,
    /// Upper bound on concurrent requests; 0 means unlimited.
    pub max_in_flight: usize,
}

impl fmt::Debug for HttpConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HttpConfig")
            .field("base_url", &self.base_url)
            .field("api_key", &self.api_key.as_ref().map(|_| "<redacted>"))
            .field("model", &self.model)
            .field("timeout", &self.timeout)
            .field("max_retries", &self.max_retries)
            .field("backoff_base", &self.backoff_base)
            .field("max_in_flight", &self.max_in_flight)
            .finish()
    }
}

impl HttpConfig {
    pub fn new(base_url: impl Into<String>, model: impl Into<String>) -> Self {
        Self {
            base_url: base_url.into(),
            api_key: None,
            model: model.into(),
            timeout: Duration::from_secs(60),
            max_retries: 2,
            backoff_base: Duration::from_millis(500),
            max_in_flight: 4,
        }
    }

    /// Reads `QOE_LLM_BASE_URL`, `QOE_LLM_MODEL` and `QOE_LLM_API_KEY`
    /// (falling back to the `OPENAI_*` equivalents), plus the optional
    /// `QOE_LLM_TIMEOUT_S`, `QOE_LLM_RETRIES` and `QOE_LLM_MAX_IN_FLIGHT`.
    pub fn from_env() -> Result<Self, LlmError> {
        let var = |names: &[&str]| {
            names
                .iter()
                .find_map(|n| std::env::var(n).ok().filter(|v| !v.is_empty()))
        };
        let base_url = var(&["QOE_LLM_BASE_URL", "OPENAI_BASE_URL"])
            .ok_or_else(|| LlmError::Config("QOE_LLM_BASE_URL is not set".into()))?;
        let model = var(&["QOE_LLM_MODEL", "OPENAI_MODEL"])
            .ok_or_else(|| LlmError::Config("QOE_LLM_MODEL is not set".into()))?;
        let mut cfg = Self::new(base_url, model);
        cfg.api_key = var(&["QOE_LLM_API_KEY", "OPENAI_API_KEY"]);
        if let Some(v) = var(&["QOE_LLM_TIMEOUT_S"]) {
            let secs: f64 = v
                .parse()
                .map_err(|_| LlmError::Config(format!("QOE_LLM_TIMEOUT_S: {v:?} is not a number")))?;
            cfg.timeout = Duration::from_secs_f64(secs);
        }
        if let Some(v) = var(&["QOE_LLM_RETRIES"]) {
            cfg.max_retries = v
                .parse()
                .map_err(|_| LlmError::Config(format!("QOE_LLM_RETRIES: {v:?} is not an integer")))?;
        }
        if let Some(v) = var(&["QOE_LLM_MAX_IN_FLIGHT"]) {
            cfg.max_in_flight = v
                .parse()
                .map_err(|_| LlmError::Config(format!("QOE_LLM_MAX_IN_FLIGHT: {v:?} is not an integer")))?;
        }
        Ok(cfg)
    }
}

/// Counting semaphore bounding concurrent requests.
struct Gate {
    limit: usize,
    in_flight: Mutex<usize>,
    freed: Condvar,
}

struct Permit<'a>(&'a Gate);

impl Gate {
    fn acquire(&self) -> Option<Permit<'_>> {
        if self.limit == 0 {
            return None;
        }
        let mut n = self.in_flight.lock().unwrap_or_else(|e| e.into_inner());
        while *n >= self.limit {
            n = self.freed.wait(n).unwrap_or_else(|e| e.into_inner());
        }
        *n += 1;
        Some(Permit(self))
    }
}

impl Drop for Permit<'_> {
    fn drop(&mut self) {
        let mut n = self.0.in_flight.lock().unwrap_or_else(|e| e.into_inner());
        *n -= 1;
        self.0.freed.notify_one();
    }
}

pub struct HttpLlm {
    config: HttpConfig,
    agent: Agent,
    gate: Gate,
}

impl HttpLlm {
    pub fn new(config: HttpConfig) -> Result<Self, LlmError> {
        if config.base_url.trim().is_empty() {
            return Err(LlmError::Config("base_url is empty".into()));
        }
        if config.model.trim().is_empty() {
            return Err(LlmError::Config("model is empty".into()));
        }
        let agent: Agent = Agent::config_builder()
            .timeout_global(Some(config.timeout))
            .http_status_as_error(false)
            .build()
            .into();
        let gate = Gate {
            limit: config.max_in_flight,
            in_flight: Mutex::new(0),
            freed: Condvar::new(),
        };
        Ok(Self { config, agent, gate })
    }

    pub fn config(&self) -> &HttpConfig {
        &self.config
    }

    fn endpoint(&self) -> String {
        format!("{}/chat/completions", self.config.base_url.trim_end_matches('/'))
    }

    fn attempt(&self, request: &GenerationRequest) -> Result<GenerationResponse, LlmError> {
        let body = json!({
            "model": self.config.model,
            "messages": [
                {"role": "system", "content": request.system_text},
                {"role": "user", "content": request.user_text},
            ],
            "max_tokens": request.max_tokens,
            "temperature": request.temperature,
        });
        let _permit = self.gate.acquire();
        let started = Instant::now();
        let mut call = self
            .agent
            .post(&self.endpoint())
            .header("Content-Type", "application/json");
        if let Some(key) = &self.config.api_key {
            call = call.header("Authorization", &format!("Bearer {key}"));
        }
        let mut response = call.send(body.to_string()).map_err(|e| self.map_transport(e))?;
        let status = response.status().as_u16();
        let text = response
            .body_mut()
            .read_to_string()
            .map_err(|e| self.map_transport(e))?;
        let latency_ms = started.elapsed().as_secs_f64() * 1e3;
        if !(200..300).contains(&status) {
            return Err(LlmError::Status {
                status,
                body: text.chars().take(500).collect(),
            });
        }
        parse_completion(&text, request, latency_ms)
    }

    fn map_transport(&self, err: ureq::Error) -> LlmError {
        match err {
            ureq::Error::Timeout(_) => LlmError::Timeout(self.config.timeout),
            ureq::Error::Io(e) if e.kind() == std::io::ErrorKind::TimedOut => LlmError::Timeout(self.config.timeout),
            ureq::Error::StatusCode(status) => LlmError::Status {
                status,
                body: String::new(),
            },
            other => LlmError::Transport(other.to_string()),
        }
    }
}

fn parse_completion(text: &str, request: &GenerationRequest, latency_ms: f64) -> Result<GenerationResponse, LlmError> {
    let value: Value = serde_json::from_str(text).map_err(|e| LlmError::MalformedBody(e.to_string()))?;
    let content = value
        .pointer("/choices/0/message/content")
        .and_then(Value::as_str)
        .ok_or_else(|| LlmError::MalformedBody("missing choices[0].message.content".into()))?;
    let usage = |key: &str| value.pointer(&format!("/usage/{key}")).and_then(Value::as_u64);
    Ok(GenerationResponse {
        text: content.to_string(),
        backend: Backend::Http,
        latency_ms,
        prompt_tokens: usage("prompt_tokens")
            .map(|n| n as u32)
            .unwrap_or_else(|| word_count(&request.system_text) + word_count(&request.user_text)),
        completion_tokens: usage("completion_tokens")
            .map(|n| n as u32)
            .unwrap_or_else(|| word_count(content)),
    })
}

impl TextGenerator for HttpLlm {
    fn generate(&self, request: &GenerationRequest) -> Result<GenerationResponse, LlmError> {
        request.validate()?;
        let attempts = self.config.max_retries + 1;
        let mut last = None;
        for attempt in 0..attempts {
            if attempt > 0 {
                let wait = self.config.backoff_base.saturating_mul(1 << (attempt - 1).min(16));
                log::debug!("retrying {:?} request in {wait:?}", request.tag);
                thread::sleep(wait);
            }
            match self.attempt(request) {
                Ok(resp) => return Ok(resp),
                Err(e) if e.is_retryable() => {
                    log::warn!("{:?} request attempt {} failed: {e}", request.tag, attempt + 1);
                    last = Some(e);
                }
                Err(e) => return Err(e),
            }
        }
        let last = last.expect("at least one attempt");
        if attempts == 1 {
            Err(last)
        } else {
            Err(LlmError::RetriesExhausted {
                attempts,
                last: Box::new(last),
            })
        }
    }

    fn backend(&self) -> Backend {
        Backend::Http
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::llm::RequestTag;

    #[test]
    fn debug_redacts_key() {
        let mut cfg = HttpConfig::new("http://x", "m");
        cfg.api_key = Some("sk-secret".into());
        let shown = format!("{cfg:?}");
        assert!(!shown.contains("sk-secret"));
        assert!(shown.contains("<redacted>"));
    }

    #[test]
    fn parses_openai_body() {
        let req = GenerationRequest::new(RequestTag::Route, "s", "u").unwrap();
        let body =
            r#"{"choices":[{"message":{"content":"SELECTED: a"}}],"usage":{"prompt_tokens":12,"completion_tokens":3}}"#;
        let resp = parse_completion(body, &req, 5.0).unwrap();
        assert_eq!(resp.text, "SELECTED: a");
        assert_eq!((resp.prompt_tokens, resp.completion_tokens), (12, 3));
        assert!(matches!(
            parse_completion("{}", &req, 1.0),
            Err(LlmError::MalformedBody(_))
        ));
        assert!(matches!(
            parse_completion("not json", &req, 1.0),
            Err(LlmError::MalformedBody(_))
        ));
    }

    #[test]
    fn rejects_empty_config() {
        assert!(matches!(
            HttpLlm::new(HttpConfig::new("", "m")),
            Err(LlmError::Config(_))
        ));
    }
}
