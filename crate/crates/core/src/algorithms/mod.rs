//! The search strategies: traditional baselines, sampling baselines, beam search, SeaL and SeaL-C.

mod beam;
mod sampling;
mod seal;
mod traditional;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::advisor::Advisor;
use crate::domain::{Domain, PlanningProblem};
use crate::error::ParseError;
use crate::search::{Halt, RunRecord, SearchBudget};
use crate::session::Session;

pub use beam::run_beam;
pub use sampling::{run_best_of_n, run_cot, run_majority_vote};
pub use seal::{run_seal, run_seal_c};
pub use traditional::{run_bfs, run_dfs, run_exhaustive};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgorithmId {
    Exhaustive,
    Dfs,
    Bfs,
    DfsPrune,
    BfsPrune,
    Cot,
    MajorityVote,
    BestOfN,
    Beam,
    BeamRv,
    Seal,
    SealC,
}

impl AlgorithmId {
    pub const ALL: [AlgorithmId; 12] = [
        AlgorithmId::Exhaustive,
        AlgorithmId::Dfs,
        AlgorithmId::Bfs,
        AlgorithmId::DfsPrune,
        AlgorithmId::BfsPrune,
        AlgorithmId::Cot,
        AlgorithmId::MajorityVote,
        AlgorithmId::BestOfN,
        AlgorithmId::Beam,
        AlgorithmId::BeamRv,
        AlgorithmId::Seal,
        AlgorithmId::SealC,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AlgorithmId::Exhaustive => "exhaustive",
            AlgorithmId::Dfs => "dfs",
            AlgorithmId::Bfs => "bfs",
            AlgorithmId::DfsPrune => "dfs_prune",
            AlgorithmId::BfsPrune => "bfs_prune",
            AlgorithmId::Cot => "cot",
            AlgorithmId::MajorityVote => "majority_vote",
            AlgorithmId::BestOfN => "best_of_n",
            AlgorithmId::Beam => "beam",
            AlgorithmId::BeamRv => "beam_rv",
            AlgorithmId::Seal => "seal",
            AlgorithmId::SealC => "seal_c",
        }
    }

    /// Traditional searches never consult the advisor.
    pub fn uses_advisor(self) -> bool {
        !matches!(
            self,
            AlgorithmId::Exhaustive | AlgorithmId::Dfs | AlgorithmId::Bfs | AlgorithmId::DfsPrune | AlgorithmId::BfsPrune
        )
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AlgorithmId {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase().replace('-', "_");
        Self::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| ParseError::new(format!("unknown algorithm `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AblationFlag {
    NoValidity,
    NoDirectSolve,
    NoRanking,
    /// No rule verifier: skip direct solving and accept structural goals.
    NoVerifier,
}

impl AblationFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            AblationFlag::NoValidity => "no_validity",
            AblationFlag::NoDirectSolve => "no_direct_solve",
            AblationFlag::NoRanking => "no_ranking",
            AblationFlag::NoVerifier => "no_verifier",
        }
    }
}

impl FromStr for AblationFlag {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "no_validity" | "v" => Ok(AblationFlag::NoValidity),
            "no_direct_solve" | "d" => Ok(AblationFlag::NoDirectSolve),
            "no_ranking" | "r" => Ok(AblationFlag::NoRanking),
            "no_verifier" | "nv" => Ok(AblationFlag::NoVerifier),
            other => Err(ParseError::new(format!("unknown ablation flag `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmConfig {
    pub id: AlgorithmId,
    /// Samples for majority vote and best-of-N; defaults to 10 and 20.
    #[serde(default)]
    pub n_samples: Option<usize>,
    #[serde(default = "default_beam_width")]
    pub beam_width: usize,
    /// Value samples averaged per beam candidate.
    #[serde(default = "default_eval_samples")]
    pub eval_samples: usize,
    /// Value samples averaged per state when SeaL ranks siblings.
    #[serde(default = "default_rank_samples")]
    pub rank_samples: usize,
    #[serde(default)]
    pub ablation: BTreeSet<AblationFlag>,
}

fn default_beam_width() -> usize {
    5
}

fn default_eval_samples() -> usize {
    3
}

fn default_rank_samples() -> usize {
    1
}

impl AlgorithmConfig {
    pub fn new(id: AlgorithmId) -> Self {
        Self {
            id,
            n_samples: None,
            beam_width: default_beam_width(),
            eval_samples: default_eval_samples(),
            rank_samples: default_rank_samples(),
            ablation: BTreeSet::new(),
        }
    }

    pub fn with_flags(mut self, flags: &[AblationFlag]) -> Self {
        self.ablation.extend(flags.iter().copied());
        self
    }

    pub fn has(&self, flag: AblationFlag) -> bool {
        self.ablation.contains(&flag)
    }

    pub fn samples(&self) -> usize {
        self.n_samples.unwrap_or(match self.id {
            AlgorithmId::MajorityVote => 10,
            AlgorithmId::BestOfN => 20,
            _ => 1,
        })
    }

    pub fn validate(&self) -> Result<(), ParseError> {
        if !self.ablation.is_empty() && !matches!(self.id, AlgorithmId::Seal | AlgorithmId::SealC) {
            return Err(ParseError::new(format!("ablation flags apply only to seal and seal_c, not {}", self.id)));
        }
        if self.samples() == 0 || self.beam_width == 0 || self.eval_samples == 0 || self.rank_samples == 0 {
            return Err(ParseError::new(format!("{}: sample counts and beam width must be at least 1", self.id)));
        }
        Ok(())
    }

    /// The id written to run records, e.g. `seal` or `seal:no_ranking,no_validity`.
    pub fn label(&self) -> String {
        if self.ablation.is_empty() {
            return self.id.as_str().to_string();
        }
        let flags: Vec<&str> = self.ablation.iter().map(|f| f.as_str()).collect();
        format!("{}:{}", self.id, flags.join(","))
    }
}

impl FromStr for AlgorithmConfig {
    type Err = ParseError;

    /// Reads a label as written by [`AlgorithmConfig::label`].
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (id, flags) = s.split_once(':').unwrap_or((s, ""));
        let mut cfg = AlgorithmConfig::new(id.parse()?);
        for f in flags.split(',').filter(|f| !f.trim().is_empty()) {
            cfg.ablation.insert(f.parse()?);
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Runs the configured algorithm inside an existing session. Returns the submitted solution, if any.
pub fn execute<D: Domain>(
    s: &mut Session<'_, D>,
    cfg: &AlgorithmConfig,
    advisor: &dyn Advisor<D>,
) -> Result<Option<D::Solution>, Halt> {
    match cfg.id {
        AlgorithmId::Exhaustive => run_exhaustive(s),
        AlgorithmId::Dfs => run_dfs(s, false),
        AlgorithmId::DfsPrune => run_dfs(s, true),
        AlgorithmId::Bfs => run_bfs(s, false),
        AlgorithmId::BfsPrune => run_bfs(s, true),
        AlgorithmId::Cot => run_cot(s, advisor),
        AlgorithmId::MajorityVote => run_majority_vote(s, advisor, cfg.samples()),
        AlgorithmId::BestOfN => run_best_of_n(s, advisor, cfg.samples()),
        AlgorithmId::Beam => run_beam(s, advisor, cfg, false),
        AlgorithmId::BeamRv => run_beam(s, advisor, cfg, true),
        AlgorithmId::Seal => run_seal(s, advisor, cfg),
        AlgorithmId::SealC => run_seal_c(s, advisor, cfg),
    }
}

/// Builds the record for a finished session. Grading against the verifier is not charged.
pub fn finish<D: Domain>(
    s: &Session<'_, D>,
    cfg: &AlgorithmConfig,
    advisor_id: &str,
    outcome: Result<Option<D::Solution>, Halt>,
    config_hash: &str,
) -> RunRecord {
    let (answer, halt) = match outcome {
        Ok(a) => (a, None),
        Err(h) => (None, Some(h.to_string())),
    };
    let goal = s.goal();
    let solved = answer.as_ref().is_some_and(|a| s.domain.verify(goal, a));
    let metrics = answer.as_ref().map(|a| s.domain.grade(goal, a)).unwrap_or_default();
    let stats = *s.meter.stats();
    RunRecord {
        problem_id: s.problem.id.clone(),
        domain: D::KIND.to_string(),
        algorithm_id: cfg.label(),
        advisor_id: if cfg.id.uses_advisor() { advisor_id.to_string() } else { "none".into() },
        budget: s.meter.budget().max_ss,
        solved,
        solution: answer.map(|a| serde_json::to_value(a).expect("solutions serialize")),
        stats,
        total_ss: stats.total_ss(),
        elapsed_ms: s.meter.elapsed().as_millis() as u64,
        config_hash: config_hash.to_string(),
        halt,
        advisor_failures: s.advisor_failures,
        difficulty: None,
        metrics,
        error: None,
    }
}

/// One problem, one algorithm, one advisor. Only a configuration error is returned as `Err`.
pub fn run<D: Domain>(
    domain: &D,
    problem: &PlanningProblem<D>,
    cfg: &AlgorithmConfig,
    advisor: &dyn Advisor<D>,
    budget: SearchBudget,
    config_hash: &str,
) -> Result<RunRecord, Halt> {
    let mut s = Session::new(domain, problem, budget, advisor.seed());
    let outcome = execute(&mut s, cfg, advisor);
    if let Err(Halt::Config(msg)) = &outcome {
        return Err(Halt::Config(msg.clone()));
    }
    Ok(finish(&s, cfg, &advisor.id(), outcome, config_hash))
}
