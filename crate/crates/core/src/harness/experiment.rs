//! Run matrices: problems × algorithms × advisors × budgets, appended to a JSONL file.

use std::collections::HashSet;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Duration;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::bucket::assign_levels;
use super::config::{AdvisorConfig, AdvisorKind, ExperimentConfig, Selection};
use super::dataset;
use crate::advisor::{Adversarial, Advisor, LlmAdvisor, NullAdvisor, OracleDomain, PerfectOracle, Stochastic};
use crate::algorithms::{self, AlgorithmConfig};
use crate::domain::{DomainKind, PlanningProblem};
use crate::error::Error;
use crate::llm::prompts::PromptDomain;
use crate::llm::{Cassette, CassetteMode, ChatBackend, HttpChat, HttpConfig, LlmSettings};
use crate::search::{Halt, RunRecord, SearchBudget};

pub type RunKey = (String, String, String, Option<u64>);

/// What one invocation did.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Outcome {
    pub written: usize,
    pub skipped: usize,
    /// Runs in this invocation that consulted an advisor.
    pub advised_runs: usize,
    /// Advised runs whose every model call failed.
    pub dead_advisor_runs: usize,
    pub remote: bool,
    pub output: PathBuf,
}

impl Outcome {
    /// True when a remote advisor never answered.
    pub fn advisor_unavailable(&self) -> bool {
        self.remote && self.advised_runs > 0 && self.dead_advisor_runs == self.advised_runs
    }
}

/// Row indices picked by range, stride, and seeded sampling, in dataset order.
pub fn select_indices(total: usize, sel: &Selection) -> Vec<usize> {
    let [start, end] = sel.range.unwrap_or([0, total]);
    let stride = sel.stride.unwrap_or(1).max(1);
    let mut picked: Vec<usize> = (start.min(total)..end.min(total)).step_by(stride).collect();
    if let Some(k) = sel.sample {
        if k < picked.len() {
            let mut rng = ChaCha8Rng::seed_from_u64(sel.sample_seed);
            let mut chosen: Vec<usize> = rand::seq::index::sample(&mut rng, picked.len(), k).into_vec();
            chosen.sort_unstable();
            picked = chosen.into_iter().map(|i| picked[i]).collect();
        }
    }
    picked
}

/// Applies the selection, assigns levels over the selected set, then filters by level.
pub fn prepare<D: crate::domain::Domain>(
    problems: Vec<PlanningProblem<D>>,
    sel: &Selection,
    cuts: Option<&[u32]>,
) -> Vec<(PlanningProblem<D>, Option<u32>)> {
    let keep: HashSet<usize> = select_indices(problems.len(), sel).into_iter().collect();
    let chosen: Vec<PlanningProblem<D>> =
        problems.into_iter().enumerate().filter(|(i, _)| keep.contains(i)).map(|(_, p)| p).collect();
    let levels = assign_levels(&chosen, cuts);
    chosen
        .into_iter()
        .zip(levels)
        .filter(|(_, l)| match &sel.levels {
            Some(wanted) => l.is_some_and(|l| wanted.contains(&l)),
            None => true,
        })
        .collect()
}

/// The live or recorded chat backend an LLM advisor talks to.
pub fn make_backend(cfg: &AdvisorConfig) -> Result<Arc<dyn ChatBackend>, Error> {
    let live: Option<Arc<dyn ChatBackend>> = match &cfg.endpoint {
        Some(url) if cfg.cassette_mode != Some(CassetteMode::Replay) => {
            let mut http = HttpConfig::new(url.clone());
            http.max_in_flight = cfg.max_in_flight;
            if let Some(var) = &cfg.api_key_env {
                let key = std::env::var(var)
                    .map_err(|_| Error::Config(format!("environment variable `{var}` is not set")))?;
                http.api_key = Some(key);
            }
            Some(Arc::new(HttpChat::new(http).map_err(|e| Error::Config(e.to_string()))?))
        }
        _ => None,
    };
    match (&cfg.cassette, live) {
        (Some(path), live) => {
            let mode = cfg.cassette_mode.unwrap_or(CassetteMode::Record);
            Ok(Arc::new(Cassette::open(path.clone(), mode, live)?))
        }
        (None, Some(live)) => Ok(live),
        (None, None) => Err(Error::Config("llm advisor needs an endpoint or a cassette".into())),
    }
}

/// Builds the advisor for one seed. `backend` is required for the LLM kind.
pub fn make_advisor<D: PromptDomain + OracleDomain>(
    cfg: &AdvisorConfig,
    seed: Option<u64>,
    backend: Option<&Arc<dyn ChatBackend>>,
) -> Result<Box<dyn Advisor<D>>, Error> {
    Ok(match cfg.kind {
        AdvisorKind::Null => Box::new(NullAdvisor),
        AdvisorKind::PerfectOracle => Box::new(PerfectOracle::<D>::new()),
        AdvisorKind::Adversarial => Box::new(Adversarial::<D>::new()),
        AdvisorKind::Stochastic => {
            let rate = cfg.error_rate.ok_or_else(|| Error::Config("stochastic advisor needs error_rate".into()))?;
            Box::new(Stochastic::<D>::new(seed.unwrap_or(0), rate))
        }
        AdvisorKind::Llm => {
            let backend = backend.ok_or_else(|| Error::Config("llm advisor built without a backend".into()))?;
            let model = cfg.model.clone().ok_or_else(|| Error::Config("llm advisor needs a model".into()))?;
            let settings = LlmSettings { model, temperature: cfg.temperature, max_tokens: cfg.max_tokens, seed };
            Box::new(LlmAdvisor::new(backend.clone(), settings))
        }
    })
}

/// Reads records, ignoring a trailing partial line left by an interrupted write.
pub fn load_records(path: &Path) -> Result<Vec<RunRecord>, Error> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(Error::io(path, e)),
    };
    let lines: Vec<String> = BufReader::new(file).lines().collect::<Result<_, _>>().map_err(|e| Error::io(path, e))?;
    let mut out = Vec::with_capacity(lines.len());
    for (i, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str(line) {
            Ok(r) => out.push(r),
            Err(_) if i + 1 == lines.len() => log::warn!("{}: ignoring partial last line", path.display()),
            Err(e) => return Err(Error::dataset(path, format!("line {}", i + 1), e.to_string())),
        }
    }
    Ok(out)
}

/// Records sorted by run key and serialized without wall-clock time, for equality checks across reruns.
pub fn canonical_lines(records: &[RunRecord]) -> Vec<String> {
    let mut recs: Vec<RunRecord> = records.iter().cloned().map(|mut r| {
        r.elapsed_ms = 0;
        r
    }).collect();
    recs.sort_by(|a, b| a.run_key().cmp(&b.run_key()));
    recs.iter().map(|r| serde_json::to_string(r).expect("records serialize")).collect()
}

/// Serialized appender; each record is flushed as soon as it is written.
pub struct RecordSink {
    path: PathBuf,
    file: Mutex<File>,
}

impl RecordSink {
    /// Opens for append, first cutting any partial last line.
    pub fn open(path: &Path) -> Result<Self, Error> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        let mut file = OpenOptions::new().create(true).read(true).append(true).open(path).map_err(|e| Error::io(path, e))?;
        let mut text = Vec::new();
        file.read_to_end(&mut text).map_err(|e| Error::io(path, e))?;
        if !text.is_empty() && text.last() != Some(&b'\n') {
            let keep = text.iter().rposition(|b| *b == b'\n').map_or(0, |p| p + 1);
            file.set_len(keep as u64).map_err(|e| Error::io(path, e))?;
            file.seek(SeekFrom::End(0)).map_err(|e| Error::io(path, e))?;
        }
        Ok(Self { path: path.to_path_buf(), file: Mutex::new(file) })
    }

    pub fn append(&self, rec: &RunRecord) -> Result<(), Error> {
        let line = serde_json::to_string(rec)?;
        let mut f = self.file.lock().expect("sink lock");
        writeln!(f, "{line}").and_then(|_| f.flush()).map_err(|e| Error::io(&self.path, e))
    }
}

struct Job {
    problem: usize,
    algorithm: usize,
    advisor: usize,
    budget: Option<u64>,
    key: RunKey,
}

/// Runs every missing cell of the matrix. Traditional searches ignore the advisor and run once per budget.
pub fn run_matrix<D: crate::domain::Domain>(
    domain: &D,
    problems: &[(PlanningProblem<D>, Option<u32>)],
    algorithms: &[AlgorithmConfig],
    advisors: &[Box<dyn Advisor<D>>],
    budgets: &[Option<u64>],
    deadline: Option<Duration>,
    config_hash: &str,
    workers: usize,
    sink: &RecordSink,
    done: &HashSet<RunKey>,
) -> Result<Outcome, Error> {
    let mut jobs = Vec::new();
    let mut skipped = 0;
    let mut seen = HashSet::new();
    for &budget in budgets {
        for (ai, alg) in algorithms.iter().enumerate() {
            for (vi, adv) in advisors.iter().enumerate() {
                let advisor_id = if alg.id.uses_advisor() { adv.id() } else { "none".to_string() };
                for (pi, (p, _)) in problems.iter().enumerate() {
                    let key = (p.id.clone(), alg.label(), advisor_id.clone(), budget);
                    if done.contains(&key) {
                        skipped += 1;
                    } else if seen.insert(key.clone()) {
                        jobs.push(Job { problem: pi, algorithm: ai, advisor: vi, budget, key });
                    }
                }
            }
        }
    }
    let abort: Mutex<Option<Error>> = Mutex::new(None);
    let stop = AtomicBool::new(false);
    let stats = Mutex::new(Outcome { skipped, ..Default::default() });
    let work = |job: &Job| {
        if stop.load(Ordering::Relaxed) {
            return;
        }
        let (problem, level) = &problems[job.problem];
        let alg = &algorithms[job.algorithm];
        let advisor = advisors[job.advisor].as_ref();
        let budget = SearchBudget { max_ss: job.budget, deadline };
        let result = match algorithms::run(domain, problem, alg, advisor, budget, config_hash) {
            Ok(mut rec) => {
                rec.difficulty = *level;
                if rec.advisor_failures > 0 {
                    rec.error = Some(format!("{} advisor calls failed", rec.advisor_failures));
                }
                log::info!("{:?} solved={} ss={}", job.key, rec.solved, rec.total_ss);
                sink.append(&rec).map(|_| rec)
            }
            Err(Halt::Config(m)) => Err(Error::Config(m)),
            Err(other) => Err(Error::Config(other.to_string())),
        };
        match result {
            Ok(rec) => {
                let mut o = stats.lock().expect("stats lock");
                o.written += 1;
                if alg.id.uses_advisor() {
                    o.advised_runs += 1;
                    if rec.advisor_failures > 0 && rec.stats.llm_calls() == 0 {
                        o.dead_advisor_runs += 1;
                    }
                }
            }
            Err(e) => {
                stop.store(true, Ordering::Relaxed);
                abort.lock().expect("abort lock").get_or_insert(e);
            }
        }
    };
    if workers <= 1 {
        jobs.iter().for_each(work);
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
        pool.install(|| jobs.par_iter().for_each(work));
    }
    if let Some(e) = abort.into_inner().expect("abort lock") {
        return Err(e);
    }
    Ok(stats.into_inner().expect("stats lock"))
}

fn run_domain<D: PromptDomain + OracleDomain>(
    domain: &D,
    loaded: dataset::Loaded<D>,
    cfg: &ExperimentConfig,
) -> Result<Outcome, Error> {
    for w in &loaded.warnings {
        log::warn!("{w}");
    }
    let problems = prepare(loaded.problems, &cfg.selection, cfg.level_cuts.as_deref());
    if problems.is_empty() {
        return Err(Error::Config("the selection matches no problems".into()));
    }
    let backend = if cfg.advisor.kind == AdvisorKind::Llm { Some(make_backend(&cfg.advisor)?) } else { None };
    let advisors = cfg
        .advisor_seeds()
        .into_iter()
        .map(|seed| make_advisor::<D>(&cfg.advisor, seed, backend.as_ref()))
        .collect::<Result<Vec<_>, _>>()?;
    let done: HashSet<RunKey> = load_records(&cfg.output)?.iter().map(RunRecord::run_key).collect();
    let sink = RecordSink::open(&cfg.output)?;
    let mut out = run_matrix(
        domain,
        &problems,
        &cfg.algorithms,
        &advisors,
        &cfg.budgets(),
        cfg.deadline_ms().map(Duration::from_millis),
        &cfg.config_hash(),
        cfg.workers,
        &sink,
        &done,
    )?;
    out.remote = cfg.advisor.is_remote();
    out.output = cfg.output.clone();
    Ok(out)
}

/// Loads the dataset named by the config and runs the whole matrix, resuming from existing output.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Outcome, Error> {
    use crate::domains::{blocksworld::Blocksworld, crosswords::Crosswords, game24::Game24};
    match cfg.domain {
        DomainKind::Game24 => run_domain(&Game24, dataset::load_game24(&cfg.dataset)?, cfg),
        DomainKind::Crosswords => run_domain(&Crosswords, dataset::load_crosswords(&cfg.dataset)?, cfg),
        DomainKind::Blocksworld => run_domain(&Blocksworld, dataset::load_blocksworld(&cfg.dataset)?, cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selection_range_stride_sample() {
        let sel = Selection { range: Some([900, 1000]), ..Default::default() };
        let idx = select_indices(1362, &sel);
        assert_eq!((idx.len(), idx[0], idx[99]), (100, 900, 999));
        let sel = Selection { range: Some([0, 10]), stride: Some(3), ..Default::default() };
        assert_eq!(select_indices(1362, &sel), [0, 3, 6, 9]);
        let sel = Selection { range: Some([900, 1000]), sample: Some(20), sample_seed: 7, ..Default::default() };
        let a = select_indices(1362, &sel);
        assert_eq!(a.len(), 20);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(a, select_indices(1362, &sel));
    }

    #[test]
    fn partial_tail_is_cut_on_open() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.jsonl");
        std::fs::write(&path, "{\"a\":1}\n{\"trunc").unwrap();
        let _sink = RecordSink::open(&path).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "{\"a\":1}\n");
    }
}
