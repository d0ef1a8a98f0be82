//! Rendered prompts must match the reference transcriptions byte for byte.

use seal::llm::prompts::{render_prompt, TemplateId};
use seal::llm::self_search::{build_self_search_prompt, SelfSearchLevel};

fn golden(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

const CLUES: &str = "h1. An agendum; something to be done\nh2. An engine\nh3. Pretentious; flowery\nh4. A salon; a hall\nh5. To mock; to sneer\nv1. To heap\nv2. An Indian antelope\nv3. To intend; to plan; to devise; a nettle; to guess\nv4. A nozzle\nv5. Desiccator; more dry";

fn check(id: TemplateId, file: &str, input: &str) {
    let got = render_prompt(id, &[("input", input)]).unwrap();
    let want = golden(file);
    if got != want {
        let line = got.lines().zip(want.lines()).position(|(a, b)| a != b);
        panic!("{id} differs from {file} at line {line:?}");
    }
}

#[test]
fn game24_solve_prompt() {
    check(TemplateId::PSolveGame24, "p_solve_game24.txt", "1 2 4 7");
}

#[test]
fn crosswords_solve_prompt() {
    check(TemplateId::PSolveCrosswords, "p_solve_crosswords.txt", CLUES);
}

#[test]
fn game24_validity_prompt() {
    check(TemplateId::PCGame24, "p_c_game24.txt", "State 0: 2 4 8\nState 1: 1 2 7\nState 2: 1 4 14");
}

#[test]
fn game24_value_prompt() {
    check(TemplateId::PVGame24, "p_v_game24.txt", "2 4 8");
}

#[test]
fn self_search_prompts() {
    check(TemplateId::SelfSearchHigh, "self_search_high.txt", "4 5 6 10");
    check(TemplateId::SelfSearchLow, "self_search_low.txt", "4 5 6 10");
    assert_eq!(build_self_search_prompt(SelfSearchLevel::High, &[4, 5, 6, 10]), golden("self_search_high.txt"));
    assert_eq!(build_self_search_prompt(SelfSearchLevel::Low, &[4, 5, 6, 10]), golden("self_search_low.txt"));
}

#[test]
fn missing_placeholder_is_an_error() {
    assert!(render_prompt(TemplateId::PVGame24, &[]).is_err());
}
