//! Prompts that ask a model to run the whole search itself, at two levels of guidance.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::client::{ChatBackend, ChatError};
use super::parse::extract_solution_tag;
use super::prompts::{render_prompt, TemplateId};
use super::LlmSettings;
use crate::domains::game24::game24_verify;
use crate::error::ParseError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelfSearchLevel {
    /// Rules only; the model searches with its own strategy.
    High,
    /// Rules plus the precheck / solve / verify / decompose / rank stages.
    Low,
}

impl fmt::Display for SelfSearchLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SelfSearchLevel::High => "high",
            SelfSearchLevel::Low => "low",
        })
    }
}

impl FromStr for SelfSearchLevel {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "high" => Ok(SelfSearchLevel::High),
            "low" => Ok(SelfSearchLevel::Low),
            other => Err(ParseError::new(format!("unknown self-search level `{other}`"))),
        }
    }
}

pub fn build_self_search_prompt(level: SelfSearchLevel, inputs: &[i64]) -> String {
    let id = match level {
        SelfSearchLevel::High => TemplateId::SelfSearchHigh,
        SelfSearchLevel::Low => TemplateId::SelfSearchLow,
    };
    let input = inputs.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(" ");
    render_prompt(id, &[("input", &input)]).expect("self-search templates take only the input")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelfSearchOutcome {
    pub level: SelfSearchLevel,
    pub raw: String,
    pub expression: Option<String>,
    pub solved: bool,
}

/// One model call; the last tagged solution is checked with the Game of 24 verifier.
pub fn run_self_search(
    backend: &dyn ChatBackend,
    settings: &LlmSettings,
    level: SelfSearchLevel,
    inputs: &[i64],
) -> Result<SelfSearchOutcome, ChatError> {
    let request = settings.request(build_self_search_prompt(level, inputs), 1);
    let raw = backend.complete(&request)?.response.choices.into_iter().next().unwrap_or_default();
    let expression = extract_solution_tag(&raw);
    let solved = expression.as_deref().is_some_and(|e| game24_verify(inputs, e));
    Ok(SelfSearchOutcome { level, raw, expression, solved })
}
