//! Asks a model to run the whole search itself and checks its tagged answer.
//!
//! Prints the high- and low-guidance prompts. With SEAL_ENDPOINT and SEAL_MODEL set the
//! prompts are sent to the endpoint; otherwise a canned reply is checked.
//!
//! cargo run --release --example self_search -- 4 5 6 10

use seal::llm::self_search::{build_self_search_prompt, run_self_search, SelfSearchLevel};
use seal::llm::{ChatBackend, ChatError, ChatRequest, ChatResponse, Completion, HttpChat, HttpConfig, LlmSettings};

struct Canned;

impl ChatBackend for Canned {
    fn complete(&self, _: &ChatRequest) -> Result<Completion, ChatError> {
        let reply = "Trying 4 * 5 = 20, then 20 + 10 = 30, then 30 - 6 = 24.\n<solution> 4 * 5 + 10 - 6 </solution>";
        Ok(Completion {
            response: ChatResponse { choices: vec![reply.into()], usage: Default::default(), latency_ms: 0 },
            retries: 0,
        })
    }
}

fn main() {
    let nums: Vec<i64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let nums = if nums.len() == 4 { nums } else { vec![4, 5, 6, 10] };
    let (backend, model): (Box<dyn ChatBackend>, String) =
        match (std::env::var("SEAL_ENDPOINT"), std::env::var("SEAL_MODEL")) {
            (Ok(e), Ok(m)) => {
                let cfg = HttpConfig { api_key: std::env::var("OPENAI_API_KEY").ok(), ..HttpConfig::new(e) };
                (Box::new(HttpChat::new(cfg).expect("http client")), m)
            }
            _ => (Box::new(Canned), "canned".into()),
        };
    let settings = LlmSettings::new(model);
    for level in [SelfSearchLevel::High, SelfSearchLevel::Low] {
        let prompt = build_self_search_prompt(level, &nums);
        println!("===== {level} guidance prompt ({} lines)\n{prompt}", prompt.lines().count());
        match run_self_search(backend.as_ref(), &settings, level, &nums) {
            Ok(out) => println!(
                "----- reply\n{}\n----- extracted {:?}, verified {}\n",
                out.raw.trim(),
                out.expression,
                out.solved
            ),
            Err(e) => println!("----- request failed: {e}\n"),
        }
    }
}
