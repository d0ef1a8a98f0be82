//! Drives SeaL with a chat-model advisor and records every exchange to a cassette,
//! then replays the cassette offline and gets the same record.
//!
//! Set SEAL_ENDPOINT, SEAL_MODEL and optionally OPENAI_API_KEY to use a live endpoint;
//! otherwise a scripted stand-in answers.
//!
//! cargo run --release --example llm_advisor -- 1 1 4 6

use std::sync::Arc;

use seal::advisor::LlmAdvisor;
use seal::algorithms::run;
use seal::domains::game24::Game24;
use seal::llm::{Cassette, CassetteMode, ChatBackend, ChatError, ChatRequest, ChatResponse, Completion, HttpChat, HttpConfig, LlmSettings};
use seal::search::SearchBudget;

/// Keeps every state, rates every state `likely`, and never proposes a final answer.
struct Scripted;

impl ChatBackend for Scripted {
    fn complete(&self, request: &ChatRequest) -> Result<Completion, ChatError> {
        let reply = "Answer: yes\nConclusion: likely".to_string();
        let response = ChatResponse { choices: vec![reply; request.n], usage: Default::default(), latency_ms: 0 };
        Ok(Completion { response, retries: 0 })
    }
}

fn backend() -> (Arc<dyn ChatBackend>, String) {
    match (std::env::var("SEAL_ENDPOINT"), std::env::var("SEAL_MODEL")) {
        (Ok(endpoint), Ok(model)) => {
            let cfg = HttpConfig { api_key: std::env::var("OPENAI_API_KEY").ok(), ..HttpConfig::new(endpoint) };
            (Arc::new(HttpChat::new(cfg).expect("http client")), model)
        }
        _ => (Arc::new(Scripted), "scripted".into()),
    }
}

fn main() {
    let nums: Vec<i64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let nums = if nums.len() == 4 { nums } else { vec![1, 1, 4, 6] };
    let problem = Game24.problem("example", &nums);
    let dir = tempfile_dir();
    let tape = dir.join("llm_advisor.cassette.jsonl");
    let _ = std::fs::remove_file(&tape);
    let (live, model) = backend();
    let settings = LlmSettings { seed: Some(0), ..LlmSettings::new(model) };

    for alg in ["seal", "seal_c"] {
        let cfg = alg.parse().expect("label");
        let recorder = Cassette::open(&tape, CassetteMode::Record, Some(live.clone())).expect("cassette");
        let advisor = LlmAdvisor::new(Arc::new(recorder), settings.clone());
        let first = run(&Game24, &problem, &cfg, &advisor, SearchBudget::steps(2000), "example").expect("run");

        let player = Cassette::open(&tape, CassetteMode::Replay, None).expect("cassette");
        let recorded = player.len();
        let advisor = LlmAdvisor::new(Arc::new(player), settings.clone());
        let second = run(&Game24, &problem, &cfg, &advisor, SearchBudget::steps(2000), "example").expect("run");

        println!(
            "{alg:<7} solved {:<5} SS {:>4} (LLM {:>3}, ext {:>4}) failures {}  answer {}",
            first.solved,
            first.total_ss,
            first.stats.llm_calls(),
            first.stats.ext_calls(),
            first.advisor_failures,
            first.solution.as_ref().and_then(|v| v.as_str()).unwrap_or("-")
        );
        println!(
            "        replay of {recorded} recorded responses: same outcome {}, same steps {}",
            first.solved == second.solved,
            first.stats == second.stats
        );
    }
    println!("cassette: {}", tape.display());
}

fn tempfile_dir() -> std::path::PathBuf {
    let d = std::env::temp_dir().join("seal-examples");
    std::fs::create_dir_all(&d).expect("temp dir");
    d
}
