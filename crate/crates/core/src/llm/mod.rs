//! Model access: chat client, cassettes, prompt templates, reply parsers, and self-search prompts.

pub mod cassette;
pub mod client;
pub mod parse;
pub mod prompts;
pub mod self_search;

use serde::{Deserialize, Serialize};

pub use cassette::{Cassette, CassetteMode};
pub use client::{ChatBackend, ChatError, ChatRequest, ChatResponse, Completion, HttpChat, HttpConfig};

/// Request settings shared by every call an advisor makes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LlmSettings {
    pub model: String,
    #[serde(default = "default_temperature")]
    pub temperature: f64,
    #[serde(default)]
    pub max_tokens: Option<u32>,
    #[serde(default)]
    pub seed: Option<u64>,
}

fn default_temperature() -> f64 {
    client::DEFAULT_TEMPERATURE
}

impl LlmSettings {
    pub fn new(model: impl Into<String>) -> Self {
        Self { model: model.into(), temperature: default_temperature(), max_tokens: None, seed: None }
    }

    pub fn request(&self, prompt: impl Into<String>, n: usize) -> ChatRequest {
        ChatRequest {
            temperature: self.temperature,
            max_tokens: self.max_tokens,
            seed: self.seed,
            ..ChatRequest::new(self.model.clone(), prompt).with_n(n)
        }
    }
}
