//! OpenAI-compatible chat completions over HTTP.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Condvar, Mutex};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use serde_json::json;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: String,
    pub content: String,
}

impl ChatMessage {
    pub fn user(content: impl Into<String>) -> Self {
        Self { role: "user".into(), content: content.into() }
    }

    pub fn system(content: impl Into<String>) -> Self {
        Self { role: "system".into(), content: content.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChatRequest {
    pub model: String,
    pub messages: Vec<ChatMessage>,
    pub temperature: f64,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_tokens: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

pub const DEFAULT_TEMPERATURE: f64 = 0.7;

impl ChatRequest {
    pub fn new(model: impl Into<String>, prompt: impl Into<String>) -> Self {
        Self {
            model: model.into(),
            messages: vec![ChatMessage::user(prompt)],
            temperature: DEFAULT_TEMPERATURE,
            n: 1,
            max_tokens: None,
            seed: None,
        }
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Usage {
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChatResponse {
    pub choices: Vec<String>,
    #[serde(default)]
    pub usage: Usage,
    #[serde(default)]
    pub latency_ms: u64,
}

/// A successful exchange plus the transport retries it took.
#[derive(Clone, Debug, PartialEq)]
pub struct Completion {
    pub response: ChatResponse,
    pub retries: u32,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ChatError {
    #[error("endpoint unavailable after {retries} retries: {message}")]
    Unavailable { retries: u32, message: String },
    #[error("request rejected: {0}")]
    Config(String),
}

/// Anything that answers chat requests: the HTTP client, a cassette, or a test double.
pub trait ChatBackend: Send + Sync {
    fn complete(&self, request: &ChatRequest) -> Result<Completion, ChatError>;
}

#[derive(Clone, Debug, PartialEq)]
pub struct HttpConfig {
    /// Base URL; `/chat/completions` is appended unless already present.
    pub endpoint: String,
    pub api_key: Option<String>,
    pub max_attempts: u32,
    pub backoff: Duration,
    pub timeout: Duration,
    pub max_in_flight: usize,
}

impl HttpConfig {
    pub fn new(endpoint: impl Into<String>) -> Self {
        Self {
            endpoint: endpoint.into(),
            api_key: None,
            max_attempts: 3,
            backoff: Duration::from_millis(500),
            timeout: Duration::from_secs(120),
            max_in_flight: 8,
        }
    }

    fn url(&self) -> String {
        let base = self.endpoint.trim_end_matches('/');
        if base.ends_with("/chat/completions") {
            base.to_string()
        } else {
            format!("{base}/chat/completions")
        }
    }
}

/// Counting semaphore bounding concurrent requests.
struct Gate {
    free: Mutex<usize>,
    cv: Condvar,
}

struct Permit<'a>(&'a Gate);

impl Gate {
    fn new(n: usize) -> Self {
        Self { free: Mutex::new(n.max(1)), cv: Condvar::new() }
    }

    fn acquire(&self) -> Permit<'_> {
        let mut free = self.free.lock().expect("gate lock");
        while *free == 0 {
            free = self.cv.wait(free).expect("gate lock");
        }
        *free -= 1;
        Permit(self)
    }
}

impl Drop for Permit<'_> {
    fn drop(&mut self) {
        *self.0.free.lock().expect("gate lock") += 1;
        self.0.cv.notify_one();
    }
}

enum Attempt {
    Done(ChatResponse),
    Retry(String),
    Fatal(String),
}

pub struct HttpChat {
    cfg: HttpConfig,
    client: reqwest::blocking::Client,
    gate: Gate,
    /// Cleared once the server answers an `n > 1` request with a single choice.
    batch_ok: AtomicBool,
}

impl HttpChat {
    pub fn new(cfg: HttpConfig) -> Result<Self, ChatError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(cfg.timeout)
            .build()
            .map_err(|e| ChatError::Config(format!("http client: {e}")))?;
        let gate = Gate::new(cfg.max_in_flight);
        Ok(Self { cfg, client, gate, batch_ok: AtomicBool::new(true) })
    }

    fn attempt(&self, request: &ChatRequest) -> Attempt {
        let mut body = json!({
            "model": request.model,
            "messages": request.messages,
            "temperature": request.temperature,
            "n": request.n,
        });
        if let Some(m) = request.max_tokens {
            body["max_tokens"] = json!(m);
        }
        if let Some(s) = request.seed {
            body["seed"] = json!(s);
        }
        let mut req = self.client.post(self.cfg.url()).json(&body);
        if let Some(key) = &self.cfg.api_key {
            req = req.bearer_auth(key);
        }
        let started = Instant::now();
        let resp = match req.send() {
            Ok(r) => r,
            Err(e) => return Attempt::Retry(e.to_string()),
        };
        let status = resp.status();
        let text = resp.text().unwrap_or_default();
        if status.is_server_error() || status.as_u16() == 429 {
            return Attempt::Retry(format!("HTTP {status}: {}", snippet(&text)));
        }
        if !status.is_success() {
            return Attempt::Fatal(format!("HTTP {status}: {}", snippet(&text)));
        }
        match decode(&text) {
            Some((choices, usage)) => {
                Attempt::Done(ChatResponse { choices, usage, latency_ms: started.elapsed().as_millis() as u64 })
            }
            None => Attempt::Retry(format!("unreadable response body: {}", snippet(&text))),
        }
    }

    fn with_retries(&self, request: &ChatRequest, retries: &mut u32) -> Result<ChatResponse, ChatError> {
        let _permit = self.gate.acquire();
        let mut last = String::new();
        for i in 0..self.cfg.max_attempts.max(1) {
            if i > 0 {
                *retries += 1;
                std::thread::sleep(self.cfg.backoff * 2u32.pow(i - 1));
            }
            match self.attempt(request) {
                Attempt::Done(r) => return Ok(r),
                Attempt::Fatal(m) => return Err(ChatError::Config(m)),
                Attempt::Retry(m) => {
                    log::warn!("chat attempt {} failed: {m}", i + 1);
                    last = m;
                }
            }
        }
        Err(ChatError::Unavailable { retries: *retries, message: last })
    }
}

fn snippet(text: &str) -> String {
    text.chars().take(200).collect()
}

fn decode(text: &str) -> Option<(Vec<String>, Usage)> {
    #[derive(Deserialize)]
    struct Msg {
        content: Option<String>,
    }
    #[derive(Deserialize)]
    struct Choice {
        message: Msg,
    }
    #[derive(Deserialize)]
    struct Body {
        choices: Vec<Choice>,
        #[serde(default)]
        usage: Option<Usage>,
    }
    let body: Body = serde_json::from_str(text).ok()?;
    let choices = body.choices.into_iter().map(|c| c.message.content.unwrap_or_default()).collect();
    Some((choices, body.usage.unwrap_or_default()))
}

impl ChatBackend for HttpChat {
    /// Requests `n` choices at once, topping up with single requests when the server returns fewer.
    fn complete(&self, request: &ChatRequest) -> Result<Completion, ChatError> {
        let mut retries = 0;
        let want = request.n.max(1);
        let mut out = if want == 1 || self.batch_ok.load(Ordering::Relaxed) {
            self.with_retries(request, &mut retries)?
        } else {
            ChatResponse { choices: Vec::new(), usage: Usage::default(), latency_ms: 0 }
        };
        if out.choices.len() < want && want > 1 {
            self.batch_ok.store(false, Ordering::Relaxed);
            let single = ChatRequest { n: 1, ..request.clone() };
            while out.choices.len() < want {
                let r = self.with_retries(&single, &mut retries)?;
                out.usage.prompt_tokens += r.usage.prompt_tokens;
                out.usage.completion_tokens += r.usage.completion_tokens;
                out.latency_ms += r.latency_ms;
                let Some(choice) = r.choices.into_iter().next() else {
                    return Err(ChatError::Unavailable { retries, message: "response had no choices".into() });
                };
                out.choices.push(choice);
            }
        }
        out.choices.truncate(want);
        Ok(Completion { response: out, retries })
    }
}
