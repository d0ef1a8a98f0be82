//! SeaL-C finds every solution DFS finds, however wrong the advisor is.
//!
//! cargo run --release --example completeness

use seal::advisor::{Adversarial, Advisor, NullAdvisor, PerfectOracle, Stochastic};
use seal::algorithms::run;
use seal::domains::game24::Game24;
use seal::harness::dataset::load_game24;
use seal::harness::experiment::prepare;
use seal::harness::Selection;
use seal::search::SearchBudget;

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/game24.csv");
    let loaded = load_game24(path.as_ref()).expect("bundled dataset");
    let sel = Selection { range: Some([900, 1000]), ..Default::default() };
    let problems: Vec<_> = prepare(loaded.problems, &sel, None).into_iter().map(|(p, _)| p).collect();

    let advisors: Vec<Box<dyn Advisor<Game24>>> = vec![
        Box::new(PerfectOracle::<Game24>::new()),
        Box::new(Stochastic::<Game24>::new(0, 0.5)),
        Box::new(Adversarial::<Game24>::new()),
        Box::new(NullAdvisor),
    ];
    let dfs = "dfs".parse().expect("label");
    let base: usize = problems
        .iter()
        .map(|p| run(&Game24, p, &dfs, &NullAdvisor, SearchBudget::UNLIMITED, "").expect("run").total_ss as usize)
        .sum();
    println!("dfs: avg SS {:.1}", base as f64 / problems.len() as f64);
    for alg in ["seal", "seal_c"] {
        let cfg = alg.parse().expect("label");
        for a in &advisors {
            let recs: Vec<_> = problems
                .iter()
                .map(|p| run(&Game24, p, &cfg, a.as_ref(), SearchBudget::UNLIMITED, "").expect("run"))
                .collect();
            let solved = recs.iter().filter(|r| r.solved).count();
            let ss = recs.iter().map(|r| r.total_ss).sum::<u64>() as f64 / recs.len() as f64;
            println!("{alg:<7} {:<32} solved {solved:>3}/{}  avg SS {ss:>8.1}", a.id(), recs.len());
        }
    }
}
