//! Fills 5x5 mini crosswords and prints letter, word and game accuracy.
//!
//! cargo run --release --example crosswords_fill -- 5

use seal::advisor::{NullAdvisor, PerfectOracle, Stochastic};
use seal::algorithms::run;
use seal::domains::crosswords::Crosswords;
use seal::harness::dataset::load_crosswords;
use seal::search::SearchBudget;

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(5);
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/crosswords.json");
    let problems = load_crosswords(path.as_ref()).expect("bundled dataset").problems;
    let oracle = PerfectOracle::<Crosswords>::new();
    let noisy = Stochastic::<Crosswords>::new(1, 0.3);
    for p in problems.iter().take(n) {
        println!("{}", p.id);
        println!("{}", Crosswords.render_clues(&p.goal).trim_end());
        for (alg, rec) in [
            ("dfs", run(&Crosswords, p, &"dfs".parse().unwrap(), &NullAdvisor, SearchBudget::UNLIMITED, "")),
            ("seal", run(&Crosswords, p, &"seal".parse().unwrap(), &oracle, SearchBudget::UNLIMITED, "")),
            ("seal_c", run(&Crosswords, p, &"seal_c".parse().unwrap(), &noisy, SearchBudget::UNLIMITED, "")),
        ] {
            let rec = rec.expect("run");
            let m = |k: &str| rec.metrics.get(k).copied().unwrap_or(0.0) * 100.0;
            println!(
                "  {alg:<7} SS {:>6}  letter {:>5.1}%  word {:>5.1}%  game {:>5.1}%",
                rec.total_ss,
                m("letter_pr"),
                m("word_pr"),
                m("game_pr")
            );
            if alg == "seal_c" {
                if let Some(grid) = rec.solution.as_ref().and_then(|v| v.as_array()) {
                    for row in grid {
                        println!("    {}", row.as_str().unwrap_or(""));
                    }
                }
            }
        }
    }
}
