//! Experiment matrix, resumption, reports, and the command line.

mod common;

use std::path::{Path, PathBuf};

use seal::harness::cli::{main_with_args, EXIT_ADVISOR, EXIT_CONFIG, EXIT_DATASET, EXIT_OK};
use seal::harness::dataset::load_game24;
use seal::harness::experiment::{canonical_lines, load_records, prepare};
use seal::harness::report::{level_rows, summarize, sweep_table};
use seal::harness::{run_experiment, ExperimentConfig, Selection};

use common::data;

fn config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(format!("{name}.toml"));
    let text = format!(
        "domain = \"game24\"\ndataset = \"{}\"\noutput = \"{name}.jsonl\"\n{body}",
        data("game24.csv").display()
    );
    std::fs::write(&path, text).unwrap();
    path
}

fn load(path: &Path) -> ExperimentConfig {
    ExperimentConfig::load(path).unwrap()
}

const SLICE: &str = "[selection]\nrange = [900, 1000]\n";

#[test]
fn matrix_covers_problems_by_algorithms() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = load(&config(
        dir.path(),
        "m",
        &format!("workers = 4\nalgorithms = [{{ id = \"dfs\" }}, {{ id = \"seal\" }}]\n{SLICE}[advisor]\nkind = \"null\"\n"),
    ));
    let out = run_experiment(&cfg).unwrap();
    assert_eq!(out.written, 200);
    let recs = load_records(&cfg.output).unwrap();
    assert_eq!(recs.len(), 200);
    assert!(recs.iter().all(|r| r.stats_identity_holds() && r.difficulty.is_some()));
    let again = run_experiment(&cfg).unwrap();
    assert_eq!((again.written, again.skipped), (0, 200));
}

#[test]
fn interrupted_runs_resume_to_the_same_records() {
    let dir = tempfile::tempdir().unwrap();
    let body = format!(
        "seeds = [1, 2]\nalgorithms = [{{ id = \"beam_rv\" }}, {{ id = \"seal_c\" }}]\n[selection]\nrange = [900, 930]\n[advisor]\nkind = \"stochastic\"\nerror_rate = 0.3\n"
    );
    let cfg = load(&config(dir.path(), "r", &body));
    run_experiment(&cfg).unwrap();
    let full = canonical_lines(&load_records(&cfg.output).unwrap());
    assert_eq!(full.len(), 120);

    let text = std::fs::read_to_string(&cfg.output).unwrap();
    let mut cut: String = text.lines().take(50).map(|l| format!("{l}\n")).collect();
    cut.push_str(&text.lines().nth(50).unwrap()[..40]);
    std::fs::write(&cfg.output, cut).unwrap();
    let resumed = run_experiment(&cfg).unwrap();
    assert_eq!((resumed.skipped, resumed.written), (50, 70));
    assert_eq!(canonical_lines(&load_records(&cfg.output).unwrap()), full);
}

#[test]
fn seeded_reruns_are_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let body = |w: usize| {
        format!("workers = {w}\nseeds = [3]\nalgorithms = [{{ id = \"beam\" }}, {{ id = \"best_of_n\" }}, {{ id = \"seal\" }}]\n[selection]\nrange = [900, 940]\n[advisor]\nkind = \"stochastic\"\nerror_rate = 0.4\n")
    };
    let a = load(&config(dir.path(), "a", &body(1)));
    let b = load(&config(dir.path(), "b", &body(4)));
    assert_eq!(a.config_hash(), b.config_hash());
    run_experiment(&a).unwrap();
    run_experiment(&b).unwrap();
    let la = canonical_lines(&load_records(&a.output).unwrap());
    assert_eq!(la, canonical_lines(&load_records(&b.output).unwrap()));
    assert_eq!(la.len(), 120);
}

#[test]
fn rank_terciles_follow_human_success() {
    let loaded = load_game24(&data("game24.csv")).unwrap();
    let sel = Selection { range: Some([900, 1000]), ..Default::default() };
    let picked = prepare(loaded.problems, &sel, None);
    let mut by_level = [(0.0, 0usize); 3];
    for (p, level) in &picked {
        let l = level.expect("ranked problems get a level") as usize - 1;
        by_level[l].0 += p.meta.solved_rate.expect("solved rate column");
        by_level[l].1 += 1;
    }
    assert_eq!(by_level.map(|(_, n)| n), [34, 33, 33]);
    let means = by_level.map(|(s, n)| s / n as f64);
    assert!(means[0] > means[1] && means[1] > means[2], "{means:?}");
}

#[test]
fn reports_conserve_runs_and_split_steps() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = load(&config(
        dir.path(),
        "rep",
        &format!(
            "workers = 4\nalgorithms = [{{ id = \"dfs\" }}, {{ id = \"seal\" }}, {{ id = \"beam\" }}]\nbudget_sweep = [20, 100]\n{SLICE}[advisor]\nkind = \"perfect_oracle\"\n"
        ),
    ));
    run_experiment(&cfg).unwrap();
    let recs = load_records(&cfg.output).unwrap();
    let rows = summarize(&recs, "dfs");
    assert_eq!(rows.iter().map(|r| r.runs).sum::<usize>(), recs.len());
    for r in &rows {
        assert!((r.avg_ss - (r.avg_llm + r.avg_ext)).abs() < 1e-9, "{r:?}");
        let base = rows.iter().find(|b| b.algorithm == "dfs" && b.budget == r.budget).unwrap();
        let want = (1.0 - r.avg_ss / base.avg_ss) * 100.0;
        assert!((r.reduction.unwrap() - want).abs() < 1e-9);
    }
    let levels = level_rows(&recs);
    assert_eq!(levels.iter().map(|l| l.runs).sum::<usize>(), recs.len());
    let sweep = sweep_table(&recs);
    assert_eq!(sweep.budgets, vec![20, 100]);
    let seal = sweep.rows.iter().find(|(a, _, _)| a == "seal").unwrap();
    assert_eq!(seal.2, vec![Some(100.0), Some(100.0)]);
}

fn cli(args: &[&str]) -> i32 {
    main_with_args(std::iter::once("seal-bench").chain(args.iter().copied()))
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = config(dir.path(), "ok", &format!("algorithms = [{{ id = \"dfs\" }}]\n[selection]\nrange = [0, 3]\n[advisor]\nkind = \"null\"\n"));
    let s = |p: &Path| p.to_str().unwrap().to_string();
    assert_eq!(cli(&["run", &s(&ok)]), EXIT_OK);
    assert_eq!(cli(&["report", &s(&dir.path().join("ok.jsonl"))]), EXIT_OK);
    assert_eq!(cli(&["validate-dataset", "game24", &s(&data("game24.csv"))]), EXIT_OK);
    assert_eq!(cli(&["validate-dataset", "blocksworld", &s(&data("blocksworld.json"))]), EXIT_OK);

    assert_eq!(cli(&["frobnicate"]), EXIT_CONFIG);
    assert_eq!(cli(&["run", &s(&dir.path().join("absent.toml"))]), EXIT_CONFIG);
    let unset = dir.path().join("unset.toml");
    std::fs::write(&unset, "domain = \"game24\"\ndataset = \"${SEAL_TEST_NEVER_SET}\"\noutput = \"o.jsonl\"\nalgorithms = [{ id = \"dfs\" }]\n[advisor]\nkind = \"null\"\n").unwrap();
    assert_eq!(cli(&["run", &s(&unset)]), EXIT_CONFIG);
    let bad_alg = config(dir.path(), "bad", "algorithms = [{ id = \"dfs\", ablation = [\"no_ranking\"] }]\n[advisor]\nkind = \"null\"\n");
    assert_eq!(cli(&["run", &s(&bad_alg)]), EXIT_CONFIG);

    let missing = dir.path().join("nodata.toml");
    std::fs::write(&missing, "domain = \"game24\"\ndataset = \"nowhere.csv\"\noutput = \"o.jsonl\"\nalgorithms = [{ id = \"dfs\" }]\n[advisor]\nkind = \"null\"\n").unwrap();
    assert_eq!(cli(&["run", &s(&missing)]), EXIT_DATASET);
    let broken = dir.path().join("broken.csv");
    std::fs::write(&broken, "index,puzzle,difficulty_rank\n0,1 2 x 4,1\n").unwrap();
    assert_eq!(cli(&["validate-dataset", "game24", &s(&broken)]), EXIT_DATASET);

    let dead = config(
        dir.path(),
        "dead",
        "algorithms = [{ id = \"cot\" }]\n[selection]\nrange = [0, 2]\n[advisor]\nkind = \"llm\"\nmodel = \"m\"\nendpoint = \"http://127.0.0.1:9\"\n",
    );
    assert_eq!(cli(&["run", &s(&dead)]), EXIT_ADVISOR);
}
