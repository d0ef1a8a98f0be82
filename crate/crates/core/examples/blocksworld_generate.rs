//! Writes random Blocksworld instances in dataset form.
//!
//! cargo run --release --example blocksworld_generate -- data/blocksworld.json 100

use seal::domains::blocksworld::generate;

fn main() {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| "blocksworld.json".into());
    let count: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(100);
    let records = generate(2024, count, 3..=6, 2..=12);
    let mut hist = std::collections::BTreeMap::new();
    for r in &records {
        *hist.entry(r.min_steps).or_insert(0) += 1;
    }
    std::fs::write(&path, serde_json::to_string_pretty(&records).expect("records serialize")).expect("write dataset");
    println!("wrote {} instances to {path}", records.len());
    for (steps, n) in hist {
        println!("  min_steps {steps:>2}: {n}");
    }
}
