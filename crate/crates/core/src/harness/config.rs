//! Experiment configuration files (TOML) with `${VAR}` interpolation.

use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algorithms::AlgorithmConfig;
use crate::domain::DomainKind;
use crate::error::Error;
use crate::llm::CassetteMode;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum AdvisorKind {
    Llm,
    PerfectOracle,
    Null,
    Adversarial,
    Stochastic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdvisorConfig {
    pub kind: AdvisorKind,
    #[serde(default)]
    pub model: Option<String>,
    #[serde(default)]
    pub endpoint: Option<String>,
    /// Name of the environment variable holding the bearer token.
    #[serde(default)]
    pub api_key_env: Option<String>,
    #[serde(default = "default_temperature")]
    pub temperature: f64,
    #[serde(default)]
    pub max_tokens: Option<u32>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub error_rate: Option<f64>,
    #[serde(default = "default_in_flight")]
    pub max_in_flight: usize,
    #[serde(default)]
    pub cassette: Option<PathBuf>,
    #[serde(default)]
    pub cassette_mode: Option<CassetteMode>,
}

fn default_temperature() -> f64 {
    crate::llm::client::DEFAULT_TEMPERATURE
}

fn default_in_flight() -> usize {
    8
}

impl AdvisorConfig {
    pub fn of(kind: AdvisorKind) -> Self {
        Self {
            kind,
            model: None,
            endpoint: None,
            api_key_env: None,
            temperature: default_temperature(),
            max_tokens: None,
            seed: None,
            error_rate: None,
            max_in_flight: default_in_flight(),
            cassette: None,
            cassette_mode: None,
        }
    }

    pub fn is_remote(&self) -> bool {
        self.kind == AdvisorKind::Llm
    }
}

/// Which problems of the dataset to run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Selection {
    /// Half-open row range `[start, end)` of the dataset.
    #[serde(default)]
    pub range: Option<[usize; 2]>,
    /// Keep every `stride`-th row of the range.
    #[serde(default)]
    pub stride: Option<usize>,
    /// Draw this many problems at random (after range and stride), seeded by `sample_seed`.
    #[serde(default)]
    pub sample: Option<usize>,
    #[serde(default)]
    pub sample_seed: u64,
    /// Keep only these difficulty levels.
    #[serde(default)]
    pub levels: Option<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub domain: DomainKind,
    pub dataset: PathBuf,
    #[serde(default)]
    pub selection: Selection,
    pub algorithms: Vec<AlgorithmConfig>,
    pub advisor: AdvisorConfig,
    /// Extra advisor seeds; each seed is a separate advisor in the matrix.
    #[serde(default)]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub max_ss: Option<u64>,
    /// Per-run wall-clock limit; defaults to ten minutes for remote advisors.
    #[serde(default)]
    pub deadline_ms: Option<u64>,
    #[serde(default)]
    pub budget_sweep: Option<Vec<u64>>,
    /// Human-rank cut points between difficulty levels; terciles when absent.
    #[serde(default)]
    pub level_cuts: Option<Vec<u32>>,
    #[serde(default = "default_workers")]
    pub workers: usize,
    pub output: PathBuf,
}

fn default_workers() -> usize {
    1
}

fn env_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\$\{([A-Za-z_][A-Za-z0-9_]*)\}").expect("valid env regex"))
}

/// Replaces `${VAR}` with the variable's value; an unset variable is an error.
pub fn interpolate(text: &str, lookup: impl Fn(&str) -> Option<String>) -> Result<String, Error> {
    let mut out = String::with_capacity(text.len());
    let mut last = 0;
    for c in env_regex().captures_iter(text) {
        let m = c.get(0).expect("whole match");
        let value = lookup(&c[1]).ok_or_else(|| Error::Config(format!("environment variable `{}` is not set", &c[1])))?;
        out.push_str(&text[last..m.start()]);
        out.push_str(&value);
        last = m.end();
    }
    out.push_str(&text[last..]);
    Ok(out)
}

pub const DEFAULT_REMOTE_DEADLINE_MS: u64 = 10 * 60 * 1000;

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, Error> {
        let resolved = interpolate(text, |k| std::env::var(k).ok())?;
        let cfg: ExperimentConfig = toml::from_str(&resolved).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file; relative dataset, output and cassette paths resolve against its directory.
    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg = Self::parse(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        let rebase = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        rebase(&mut cfg.dataset);
        rebase(&mut cfg.output);
        if let Some(c) = cfg.advisor.cassette.as_mut() {
            rebase(c);
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.algorithms.is_empty() {
            return Err(Error::Config("no algorithms listed".into()));
        }
        for a in &self.algorithms {
            a.validate().map_err(|e| Error::Config(e.to_string()))?;
        }
        if let Some(b) = &self.budget_sweep {
            if b.is_empty() || b.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Config("budget_sweep must be non-empty and strictly increasing".into()));
            }
        }
        if let Some(cuts) = &self.level_cuts {
            if cuts.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Config("level_cuts must be strictly increasing".into()));
            }
        }
        let a = &self.advisor;
        if a.kind == AdvisorKind::Stochastic && !a.error_rate.is_some_and(|r| (0.0..=1.0).contains(&r)) {
            return Err(Error::Config("stochastic advisor needs error_rate in [0, 1]".into()));
        }
        if a.kind == AdvisorKind::Llm && a.model.is_none() {
            return Err(Error::Config("llm advisor needs a model".into()));
        }
        if a.kind == AdvisorKind::Llm && a.endpoint.is_none() && a.cassette_mode != Some(CassetteMode::Replay) {
            return Err(Error::Config("llm advisor needs an endpoint unless replaying a cassette".into()));
        }
        if self.workers == 0 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        Ok(())
    }

    /// Advisor seeds in matrix order: the configured seed list, else the advisor's own seed.
    pub fn advisor_seeds(&self) -> Vec<Option<u64>> {
        if self.seeds.is_empty() {
            vec![self.advisor.seed]
        } else {
            self.seeds.iter().map(|s| Some(*s)).collect()
        }
    }

    pub fn budgets(&self) -> Vec<Option<u64>> {
        match &self.budget_sweep {
            Some(b) => b.iter().map(|x| Some(*x)).collect(),
            None => vec![self.max_ss],
        }
    }

    pub fn deadline_ms(&self) -> Option<u64> {
        self.deadline_ms.or(self.advisor.is_remote().then_some(DEFAULT_REMOTE_DEADLINE_MS))
    }

    /// Digest of everything that affects results. Output path and worker count are excluded.
    pub fn config_hash(&self) -> String {
        let mut c = self.clone();
        c.output = PathBuf::new();
        c.workers = 1;
        let bytes = serde_json::to_vec(&c).expect("configs serialize");
        hex::encode(Sha256::digest(bytes))[..16].to_string()
    }
}
