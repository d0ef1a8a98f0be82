//! Runs a small matrix on Blocksworld and prints the summary and per-level tables.
//!
//! cargo run --release --example report

use seal::advisor::{NullAdvisor, PerfectOracle, Stochastic};
use seal::algorithms::run;
use seal::domains::blocksworld::Blocksworld;
use seal::harness::dataset::load_blocksworld;
use seal::harness::report::{level_rows, render_text, summarize, write_csv};
use seal::search::SearchBudget;

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/blocksworld.json");
    let problems: Vec<_> = load_blocksworld(path.as_ref())
        .expect("bundled dataset")
        .problems
        .into_iter()
        .filter(|p| p.meta.min_steps.is_some_and(|m| m <= 8))
        .collect();
    let oracle = PerfectOracle::<Blocksworld>::new();
    let noisy = Stochastic::<Blocksworld>::new(1, 0.3);
    let mut records = Vec::new();
    for p in &problems {
        for (alg, a) in [
            ("dfs_prune", &NullAdvisor as &dyn seal::advisor::Advisor<Blocksworld>),
            ("bfs_prune", &NullAdvisor),
            ("seal", &oracle),
            ("seal", &noisy),
            ("seal_c", &noisy),
        ] {
            let mut rec = run(&Blocksworld, p, &alg.parse().unwrap(), a, SearchBudget::UNLIMITED, "example").expect("run");
            rec.difficulty = p.meta.min_steps.map(|m| m as u32);
            records.push(rec);
        }
    }
    let rows = summarize(&records, "dfs_prune");
    let levels = level_rows(&records);
    print!("{}", render_text(&rows, &levels, "dfs_prune"));
    println!("\nas csv:");
    write_csv(&rows, std::io::stdout()).expect("csv");
}
