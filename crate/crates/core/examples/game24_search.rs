//! Solves one Game of 24 instance with every algorithm and prints the step accounting.
//!
//! cargo run --release --example game24_search -- 4 9 10 13

use seal::advisor::{Advisor, NullAdvisor, PerfectOracle, Stochastic};
use seal::algorithms::{run, AlgorithmConfig, AlgorithmId};
use seal::domains::game24::Game24;
use seal::search::SearchBudget;

fn main() {
    let nums: Vec<i64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let nums = if nums.len() == 4 { nums } else { vec![4, 9, 10, 13] };
    let problem = Game24.problem("example", &nums);
    let oracle = PerfectOracle::<Game24>::new();
    let noisy = Stochastic::<Game24>::new(7, 0.3);
    println!("{:<14} {:<34} {:>6} {:>5} {:>5} {:>5}  answer", "algorithm", "advisor", "solved", "SS", "LLM", "ext");
    for id in AlgorithmId::ALL {
        let advisors: Vec<&dyn Advisor<Game24>> = if id.uses_advisor() { vec![&oracle, &noisy] } else { vec![&NullAdvisor] };
        for a in advisors {
            let rec = run(&Game24, &problem, &AlgorithmConfig::new(id), a, SearchBudget::UNLIMITED, "example")
                .expect("offline advisors never reject a run");
            let answer = rec.solution.as_ref().and_then(|v| v.as_str()).unwrap_or("-").to_string();
            println!(
                "{:<14} {:<34} {:>6} {:>5} {:>5} {:>5}  {answer}",
                rec.algorithm_id,
                rec.advisor_id,
                rec.solved,
                rec.total_ss,
                rec.stats.llm_calls(),
                rec.stats.ext_calls()
            );
        }
    }
}
