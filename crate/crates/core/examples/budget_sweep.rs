//! Pass rate as a function of the step budget, from a config built in code.
//!
//! cargo run --release --example budget_sweep

use seal::algorithms::AlgorithmConfig;
use seal::domain::DomainKind;
use seal::harness::experiment::load_records;
use seal::harness::report::sweep_table;
use seal::harness::{run_experiment, AdvisorConfig, AdvisorKind, ExperimentConfig, Selection};

fn main() {
    let out = std::env::temp_dir().join("seal-examples").join("budget_sweep.jsonl");
    std::fs::create_dir_all(out.parent().unwrap()).expect("temp dir");
    let _ = std::fs::remove_file(&out);
    for (kind, rate) in [(AdvisorKind::PerfectOracle, None), (AdvisorKind::Stochastic, Some(0.3))] {
        let cfg = ExperimentConfig {
            domain: DomainKind::Game24,
            dataset: concat!(env!("CARGO_MANIFEST_DIR"), "/data/game24.csv").into(),
            selection: Selection { range: Some([900, 1000]), ..Default::default() },
            algorithms: ["beam", "beam_rv", "seal", "seal_c"].map(|a| a.parse::<AlgorithmConfig>().unwrap()).to_vec(),
            advisor: AdvisorConfig { error_rate: rate, seed: Some(0), ..AdvisorConfig::of(kind.clone()) },
            seeds: Vec::new(),
            max_ss: None,
            deadline_ms: None,
            budget_sweep: Some(vec![10, 20, 30, 50, 100, 150, 200]),
            level_cuts: None,
            workers: 4,
            output: out.clone(),
        };
        cfg.validate().expect("valid config");
        let done = run_experiment(&cfg).expect("run");
        println!("{:?}: {} runs", kind, done.written);
    }
    let records = load_records(&out).expect("records");
    print!("\n{}", sweep_table(&records).render_text());
}
