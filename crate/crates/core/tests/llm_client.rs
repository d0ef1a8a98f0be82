//! HTTP client, cassette, and model advisor against a scripted local server.

use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Duration;

use seal::advisor::LlmAdvisor;
use seal::algorithms::{run, AlgorithmConfig};
use seal::domains::game24::Game24;
use seal::llm::{Cassette, CassetteMode, ChatBackend, ChatError, ChatRequest, ChatResponse, Completion, HttpChat, HttpConfig, LlmSettings};
use seal::search::SearchBudget;
use serde_json::{json, Value};

struct Seen {
    auth: Option<String>,
    body: Value,
}

/// Serves each request with `reply(index, body) -> (status, body)`.
fn serve(reply: impl Fn(usize, &Value) -> (u16, String) + Send + 'static) -> (String, Arc<Mutex<Vec<Seen>>>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    let seen = Arc::new(Mutex::new(Vec::new()));
    let log = seen.clone();
    std::thread::spawn(move || {
        for stream in listener.incoming() {
            let Ok(mut stream) = stream else { continue };
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let (mut len, mut auth) = (0, None);
            let mut line = String::new();
            loop {
                line.clear();
                if reader.read_line(&mut line).unwrap_or(0) == 0 {
                    break;
                }
                let l = line.trim_end();
                if l.is_empty() {
                    break;
                }
                let lower = l.to_ascii_lowercase();
                if let Some(v) = lower.strip_prefix("content-length:") {
                    len = v.trim().parse().unwrap_or(0);
                }
                if lower.starts_with("authorization:") {
                    auth = Some(l["authorization:".len()..].trim().to_string());
                }
            }
            let mut buf = vec![0; len];
            reader.read_exact(&mut buf).unwrap();
            let body: Value = serde_json::from_slice(&buf).unwrap_or(Value::Null);
            let idx = {
                let mut s = log.lock().unwrap();
                s.push(Seen { auth, body: body.clone() });
                s.len() - 1
            };
            let (status, text) = reply(idx, &body);
            let resp = format!(
                "HTTP/1.1 {status} X\r\ncontent-type: application/json\r\ncontent-length: {}\r\nconnection: close\r\n\r\n{text}",
                text.len()
            );
            let _ = stream.write_all(resp.as_bytes());
        }
    });
    (format!("http://{addr}/v1"), seen)
}

fn choices(texts: &[&str]) -> String {
    let c: Vec<Value> = texts.iter().map(|t| json!({"message": {"role": "assistant", "content": t}})).collect();
    json!({"choices": c, "usage": {"prompt_tokens": 3, "completion_tokens": 5}}).to_string()
}

fn client(url: &str) -> HttpChat {
    HttpChat::new(HttpConfig {
        api_key: Some("sk-test".into()),
        backoff: Duration::from_millis(1),
        ..HttpConfig::new(url)
    })
    .unwrap()
}

#[test]
fn posts_openai_body_with_bearer_key() {
    let (url, seen) = serve(|_, _| (200, choices(&["hello"])));
    let done = client(&url).complete(&ChatRequest::new("m1", "hi")).unwrap();
    assert_eq!(done.response.choices, vec!["hello"]);
    assert_eq!(done.response.usage.completion_tokens, 5);
    assert_eq!(done.retries, 0);
    let seen = seen.lock().unwrap();
    assert_eq!(seen[0].auth.as_deref(), Some("Bearer sk-test"));
    assert_eq!(seen[0].body["model"], "m1");
    assert_eq!(seen[0].body["messages"][0]["content"], "hi");
    assert_eq!(seen[0].body["n"], 1);
}

#[test]
fn server_errors_are_retried() {
    let (url, seen) = serve(|i, _| if i < 2 { (503, "busy".into()) } else { (200, choices(&["ok"])) });
    let done = client(&url).complete(&ChatRequest::new("m", "p")).unwrap();
    assert_eq!(done.retries, 2);
    assert_eq!(seen.lock().unwrap().len(), 3);
}

#[test]
fn exhausted_retries_report_unavailable() {
    let (url, seen) = serve(|_, _| (500, "down".into()));
    let err = client(&url).complete(&ChatRequest::new("m", "p")).unwrap_err();
    assert!(matches!(err, ChatError::Unavailable { retries: 2, .. }), "{err:?}");
    assert_eq!(seen.lock().unwrap().len(), 3);
}

#[test]
fn client_errors_are_fatal_without_retry() {
    let (url, seen) = serve(|_, _| (401, "bad key".into()));
    let err = client(&url).complete(&ChatRequest::new("m", "p")).unwrap_err();
    assert!(matches!(err, ChatError::Config(_)), "{err:?}");
    assert_eq!(seen.lock().unwrap().len(), 1);
}

#[test]
fn single_choice_servers_are_topped_up() {
    let (url, seen) = serve(|i, _| (200, choices(&[&format!("c{i}")])));
    let http = client(&url);
    let done = http.complete(&ChatRequest::new("m", "p").with_n(3)).unwrap();
    assert_eq!(done.response.choices, vec!["c0", "c1", "c2"]);
    let again = http.complete(&ChatRequest::new("m", "p").with_n(2)).unwrap();
    assert_eq!(again.response.choices.len(), 2);
    let seen = seen.lock().unwrap();
    let ns: Vec<i64> = seen.iter().map(|s| s.body["n"].as_i64().unwrap()).collect();
    assert_eq!(ns, vec![3, 1, 1, 1, 1]);
}

struct Counter(AtomicUsize);

impl ChatBackend for Counter {
    fn complete(&self, request: &ChatRequest) -> Result<Completion, ChatError> {
        let i = self.0.fetch_add(1, Ordering::SeqCst);
        let choices = (0..request.n).map(|k| format!("reply {i}.{k}")).collect();
        Ok(Completion { response: ChatResponse { choices, usage: Default::default(), latency_ms: 0 }, retries: 0 })
    }
}

#[test]
fn cassette_replays_recorded_exchanges_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tape.jsonl");
    let live = Arc::new(Counter(AtomicUsize::new(0)));
    let req = ChatRequest::new("m", "same prompt");
    let recorded: Vec<_> = {
        let tape = Cassette::open(&path, CassetteMode::Record, Some(live.clone())).unwrap();
        (0..2).map(|_| tape.complete(&req).unwrap().response.choices).collect()
    };
    assert_eq!(live.0.load(Ordering::SeqCst), 2);
    let replay = Cassette::open(&path, CassetteMode::Replay, None).unwrap();
    assert_eq!(replay.len(), 2);
    for want in &recorded {
        assert_eq!(&replay.complete(&req).unwrap().response.choices, want);
    }
    assert!(matches!(replay.complete(&req), Err(ChatError::Unavailable { .. })));
    assert!(matches!(replay.complete(&ChatRequest::new("m", "other")), Err(ChatError::Unavailable { .. })));
}

#[test]
fn advisor_survives_a_dead_endpoint() {
    let (url, _) = serve(|_, _| (503, "down".into()));
    let http = HttpChat::new(HttpConfig { max_attempts: 1, ..HttpConfig::new(url) }).unwrap();
    let advisor = LlmAdvisor::new(Arc::new(http), LlmSettings::new("m"));
    let p = Game24.problem("g", &[4, 6, 4, 8]);
    let rec = run(&Game24, &p, &"seal_c".parse::<AlgorithmConfig>().unwrap(), &advisor, SearchBudget::UNLIMITED, "t").unwrap();
    assert!(rec.solved);
    assert!(rec.advisor_failures > 0);
    assert_eq!(rec.stats.llm_calls(), 0);
    assert!(rec.stats_identity_holds());
}

#[test]
fn advisor_rejected_key_halts_the_run() {
    let (url, _) = serve(|_, _| (403, "forbidden".into()));
    let advisor = LlmAdvisor::new(Arc::new(client(&url)), LlmSettings::new("m"));
    let p = Game24.problem("g", &[4, 6, 4, 8]);
    let cfg: AlgorithmConfig = "seal".parse().unwrap();
    assert!(run(&Game24, &p, &cfg, &advisor, SearchBudget::UNLIMITED, "t").is_err());
}
