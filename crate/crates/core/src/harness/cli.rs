//! The `seal-bench` command line.

use std::ffi::OsString;
use std::fs::File;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use super::config::{ExperimentConfig, AdvisorKind};
use super::experiment::{load_records, run_experiment, Outcome};
use super::report::{level_rows, render_text, summarize, sweep_table, write_csv};
use super::dataset;
use crate::domain::DomainKind;
use crate::error::Error;
use crate::llm::cassette::load_entries;
use crate::llm::CassetteMode;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DATASET: i32 = 3;
pub const EXIT_ADVISOR: i32 = 4;

pub const DEFAULT_SWEEP: [u64; 7] = [10, 20, 30, 50, 100, 150, 200];

#[derive(Parser, Debug)]
#[command(name = "seal-bench", about = "Run and report search benchmarks")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Run the experiment matrix in a config file, resuming from its output.
    Run {
        config: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the matrix once per step budget and print pass rate against budget.
    Sweep {
        config: PathBuf,
        #[arg(long, value_delimiter = ',')]
        budgets: Option<Vec<u64>>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Summarize a records file.
    Report {
        records: PathBuf,
        #[arg(long, default_value = "dfs")]
        baseline: String,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        levels_csv: Option<PathBuf>,
        /// Print the pass-rate-by-budget table instead.
        #[arg(long)]
        sweep: bool,
    },
    /// Load a dataset and report problems and warnings.
    ValidateDataset { kind: DomainKind, path: PathBuf },
    /// Summarize a cassette, or rerun a config offline against it.
    Replay {
        cassette: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::MissingVariable(_) | Error::Parse(_) => EXIT_CONFIG,
        Error::Dataset { .. } => EXIT_DATASET,
        Error::AdvisorUnavailable(_) => EXIT_ADVISOR,
        Error::Io { .. } | Error::Json(_) => EXIT_FAILURE,
    }
}

/// Parses arguments (including the program name) and runs the verb. Returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match dispatch(cli.verb) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn load_config(path: &Path, workers: Option<usize>, output: Option<PathBuf>) -> Result<ExperimentConfig, Error> {
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(w) = workers {
        cfg.workers = w;
    }
    if let Some(o) = output {
        cfg.output = o;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn finish_run(out: &Outcome) -> i32 {
    println!("{} runs written, {} already recorded, output {}", out.written, out.skipped, out.output.display());
    if out.advisor_unavailable() {
        eprintln!("error: the advisor endpoint never answered ({} runs affected)", out.dead_advisor_runs);
        return EXIT_ADVISOR;
    }
    EXIT_OK
}

fn dispatch(verb: Verb) -> Result<i32, Error> {
    match verb {
        Verb::Run { config, workers, output } => {
            let cfg = load_config(&config, workers, output)?;
            let out = run_experiment(&cfg)?;
            Ok(finish_run(&out))
        }
        Verb::Sweep { config, budgets, workers, output } => {
            let mut cfg = load_config(&config, workers, output)?;
            if let Some(b) = budgets {
                cfg.budget_sweep = Some(b);
            } else if cfg.budget_sweep.is_none() {
                cfg.budget_sweep = Some(DEFAULT_SWEEP.to_vec());
            }
            cfg.validate()?;
            let out = run_experiment(&cfg)?;
            let code = finish_run(&out);
            let hash = cfg.config_hash();
            let recs: Vec<_> = load_records(&cfg.output)?.into_iter().filter(|r| r.config_hash == hash).collect();
            print!("{}", sweep_table(&recs).render_text());
            Ok(code)
        }
        Verb::Report { records, baseline, csv, levels_csv, sweep } => {
            let recs = load_records(&records)?;
            if recs.is_empty() {
                return Err(Error::dataset(&records, "file", "no records"));
            }
            if sweep {
                let t = sweep_table(&recs);
                print!("{}", t.render_text());
                if let Some(p) = csv {
                    t.write_csv(File::create(&p).map_err(|e| Error::io(&p, e))?)?;
                }
                return Ok(EXIT_OK);
            }
            let rows = summarize(&recs, &baseline);
            if !rows.iter().any(|r| r.algorithm == baseline) {
                eprintln!("warning: baseline `{baseline}` has no records; reductions left blank");
            }
            let levels = level_rows(&recs);
            print!("{}", render_text(&rows, &levels, &baseline));
            if let Some(p) = csv {
                write_csv(&rows, File::create(&p).map_err(|e| Error::io(&p, e))?)?;
            }
            if let Some(p) = levels_csv {
                write_csv(&levels, File::create(&p).map_err(|e| Error::io(&p, e))?)?;
            }
            Ok(EXIT_OK)
        }
        Verb::ValidateDataset { kind, path } => {
            let (n, warnings) = match kind {
                DomainKind::Game24 => dataset::load_game24(&path).map(|l| (l.problems.len(), l.warnings))?,
                DomainKind::Crosswords => dataset::load_crosswords(&path).map(|l| (l.problems.len(), l.warnings))?,
                DomainKind::Blocksworld => dataset::load_blocksworld(&path).map(|l| (l.problems.len(), l.warnings))?,
            };
            for w in &warnings {
                println!("warning: {w}");
            }
            println!("{}: {n} {kind} problems, {} warnings", path.display(), warnings.len());
            Ok(EXIT_OK)
        }
        Verb::Replay { cassette, config: None, .. } => {
            if !cassette.exists() {
                return Err(Error::Config(format!("no cassette at {}", cassette.display())));
            }
            let entries = load_entries(&cassette)?;
            let models: std::collections::BTreeSet<&str> = entries.iter().map(|e| e.request.model.as_str()).collect();
            let samples: usize = entries.iter().map(|e| e.response.choices.len()).sum();
            println!(
                "{}: {} responses, {} samples, models: {}",
                cassette.display(),
                entries.len(),
                samples,
                models.into_iter().collect::<Vec<_>>().join(", ")
            );
            Ok(EXIT_OK)
        }
        Verb::Replay { cassette, config: Some(config), output } => {
            let mut cfg = load_config(&config, None, output)?;
            if cfg.advisor.kind != AdvisorKind::Llm {
                return Err(Error::Config("replay needs a config with an llm advisor".into()));
            }
            cfg.advisor.cassette = Some(cassette);
            cfg.advisor.cassette_mode = Some(CassetteMode::Replay);
            let out = run_experiment(&cfg)?;
            Ok(finish_run(&out))
        }
    }
}
