//! Domain-agnostic search plumbing: states, the step ledger, budgets, and run records.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::domain::Domain;

/// A world state together with the action path that produced it.
///
/// `key` is the domain's canonical key for `payload`, cached at construction.
pub struct SearchState<D: Domain + ?Sized> {
    pub payload: D::State,
    pub path: Vec<D::Action>,
    pub key: String,
}

impl<D: Domain + ?Sized> SearchState<D> {
    pub fn root(domain: &D, payload: D::State) -> Self {
        let key = domain.canonical_key(&payload);
        Self { payload, path: Vec::new(), key }
    }

    /// Builds the successor reached by `action`.
    pub fn child(&self, domain: &D, action: D::Action, payload: D::State) -> Self {
        let key = domain.canonical_key(&payload);
        let mut path = Vec::with_capacity(self.path.len() + 1);
        path.extend(self.path.iter().cloned());
        path.push(action);
        Self { payload, path, key }
    }

    pub fn depth(&self) -> usize {
        self.path.len()
    }
}

impl<D: Domain + ?Sized> Clone for SearchState<D> {
    fn clone(&self) -> Self {
        Self { payload: self.payload.clone(), path: self.path.clone(), key: self.key.clone() }
    }
}

impl<D: Domain + ?Sized> fmt::Debug for SearchState<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SearchState").field("key", &self.key).field("path", &self.path).finish()
    }
}

/// The six counter categories that make up the search-step total.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    LlmAnswerer,
    LlmValidity,
    LlmRanking,
    ExtDecomposition,
    ExtVerifier,
    ExtTraversedStates,
}

impl StepKind {
    pub const ALL: [StepKind; 6] = [
        StepKind::LlmAnswerer,
        StepKind::LlmValidity,
        StepKind::LlmRanking,
        StepKind::ExtDecomposition,
        StepKind::ExtVerifier,
        StepKind::ExtTraversedStates,
    ];

    pub fn is_llm(self) -> bool {
        matches!(self, StepKind::LlmAnswerer | StepKind::LlmValidity | StepKind::LlmRanking)
    }
}

/// Per-run step ledger. `transport_retries` is bookkeeping only and never part of the total.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub llm_answerer_calls: u64,
    pub llm_validity_calls: u64,
    pub llm_ranking_calls: u64,
    pub ext_decomposition_calls: u64,
    pub ext_verifier_calls: u64,
    pub ext_traversed_states: u64,
    #[serde(default)]
    pub transport_retries: u64,
}

impl SearchStats {
    pub fn get(&self, kind: StepKind) -> u64 {
        match kind {
            StepKind::LlmAnswerer => self.llm_answerer_calls,
            StepKind::LlmValidity => self.llm_validity_calls,
            StepKind::LlmRanking => self.llm_ranking_calls,
            StepKind::ExtDecomposition => self.ext_decomposition_calls,
            StepKind::ExtVerifier => self.ext_verifier_calls,
            StepKind::ExtTraversedStates => self.ext_traversed_states,
        }
    }

    fn slot(&mut self, kind: StepKind) -> &mut u64 {
        match kind {
            StepKind::LlmAnswerer => &mut self.llm_answerer_calls,
            StepKind::LlmValidity => &mut self.llm_validity_calls,
            StepKind::LlmRanking => &mut self.llm_ranking_calls,
            StepKind::ExtDecomposition => &mut self.ext_decomposition_calls,
            StepKind::ExtVerifier => &mut self.ext_verifier_calls,
            StepKind::ExtTraversedStates => &mut self.ext_traversed_states,
        }
    }

    pub fn total_ss(&self) -> u64 {
        StepKind::ALL.iter().map(|k| self.get(*k)).sum()
    }

    pub fn llm_calls(&self) -> u64 {
        self.llm_answerer_calls + self.llm_validity_calls + self.llm_ranking_calls
    }

    pub fn ext_calls(&self) -> u64 {
        self.ext_decomposition_calls + self.ext_verifier_calls + self.ext_traversed_states
    }

    /// Adds `n` steps of `kind`, refusing (and leaving the ledger untouched) if that
    /// would push the total past `max_ss`.
    pub fn charge(&mut self, kind: StepKind, n: u64, max_ss: Option<u64>) -> Result<(), Halt> {
        debug_assert!(n >= 1, "charges are at least one step");
        if let Some(limit) = max_ss {
            if self.total_ss() + n > limit {
                return Err(Halt::BudgetExceeded { limit });
            }
        }
        *self.slot(kind) += n;
        Ok(())
    }
}

/// Limits applied to a single run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_ss: Option<u64>,
    #[serde(default, with = "duration_ms")]
    pub deadline: Option<Duration>,
}

impl SearchBudget {
    pub const UNLIMITED: SearchBudget = SearchBudget { max_ss: None, deadline: None };

    pub fn steps(max_ss: u64) -> Self {
        Self { max_ss: Some(max_ss), deadline: None }
    }
}

mod duration_ms {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Option<Duration>, s: S) -> Result<S::Ok, S::Error> {
        match d {
            Some(d) => s.serialize_some(&(d.as_millis() as u64)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Duration>, D::Error> {
        Ok(Option::<u64>::deserialize(d)?.map(Duration::from_millis))
    }
}

/// Why a run stopped before finishing its search.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Halt {
    #[error("search step budget of {limit} exhausted")]
    BudgetExceeded { limit: u64 },
    #[error("wall-clock deadline expired")]
    DeadlineExpired,
    #[error("advisor configuration error: {0}")]
    Config(String),
}

/// Owns a run's ledger and enforces its budget. Every charge is checked before it lands.
#[derive(Debug)]
pub struct Meter {
    stats: SearchStats,
    budget: SearchBudget,
    started: Instant,
}

impl Meter {
    pub fn new(budget: SearchBudget) -> Self {
        Self { stats: SearchStats::default(), budget, started: Instant::now() }
    }

    pub fn budget(&self) -> SearchBudget {
        self.budget
    }

    pub fn stats(&self) -> &SearchStats {
        &self.stats
    }

    pub fn elapsed(&self) -> Duration {
        self.started.elapsed()
    }

    pub fn check_deadline(&self) -> Result<(), Halt> {
        match self.budget.deadline {
            Some(d) if self.started.elapsed() >= d => Err(Halt::DeadlineExpired),
            _ => Ok(()),
        }
    }

    /// Fails if `n` more steps would not fit. Nothing is recorded.
    pub fn ensure(&self, n: u64) -> Result<(), Halt> {
        self.check_deadline()?;
        match self.budget.max_ss {
            Some(limit) if self.stats.total_ss() + n > limit => Err(Halt::BudgetExceeded { limit }),
            _ => Ok(()),
        }
    }

    pub fn charge(&mut self, kind: StepKind, n: u64) -> Result<(), Halt> {
        self.check_deadline()?;
        self.stats.charge(kind, n, self.budget.max_ss)
    }

    pub fn note_retries(&mut self, n: u64) {
        self.stats.transport_retries += n;
    }
}

/// One problem × one algorithm × one advisor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub problem_id: String,
    pub domain: String,
    pub algorithm_id: String,
    pub advisor_id: String,
    #[serde(default)]
    pub budget: Option<u64>,
    pub solved: bool,
    pub solution: Option<serde_json::Value>,
    pub stats: SearchStats,
    pub total_ss: u64,
    pub elapsed_ms: u64,
    pub config_hash: String,
    #[serde(default)]
    pub halt: Option<String>,
    #[serde(default)]
    pub advisor_failures: u32,
    #[serde(default)]
    pub difficulty: Option<u32>,
    #[serde(default)]
    pub metrics: BTreeMap<String, f64>,
    #[serde(default)]
    pub error: Option<String>,
}

impl RunRecord {
    /// The resumability key used by the harness.
    pub fn run_key(&self) -> (String, String, String, Option<u64>) {
        (self.problem_id.clone(), self.algorithm_id.clone(), self.advisor_id.clone(), self.budget)
    }

    pub fn stats_identity_holds(&self) -> bool {
        self.total_ss == self.stats.total_ss()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_charge_counts_once() {
        let mut s = SearchStats::default();
        s.charge(StepKind::LlmAnswerer, 1, None).unwrap();
        assert_eq!(s.total_ss(), 1);
        assert_eq!(s.llm_answerer_calls, 1);
    }

    #[test]
    fn charge_at_limit_is_refused() {
        let mut s = SearchStats::default();
        s.charge(StepKind::ExtDecomposition, 3, Some(3)).unwrap();
        let err = s.charge(StepKind::LlmAnswerer, 1, Some(3)).unwrap_err();
        assert_eq!(err, Halt::BudgetExceeded { limit: 3 });
        assert_eq!(s.total_ss(), 3);
        assert_eq!(s.llm_answerer_calls, 0);
    }

    #[test]
    fn llm_and_external_split_sums_to_total() {
        let mut s = SearchStats::default();
        for (k, n) in StepKind::ALL.iter().zip(1..) {
            s.charge(*k, n, None).unwrap();
        }
        assert_eq!(s.llm_calls() + s.ext_calls(), s.total_ss());
        assert_eq!(s.total_ss(), 21);
    }

    #[test]
    fn retries_are_not_steps() {
        let mut m = Meter::new(SearchBudget::steps(1));
        m.note_retries(2);
        m.charge(StepKind::LlmAnswerer, 1).unwrap();
        assert_eq!(m.stats().total_ss(), 1);
        assert_eq!(m.stats().transport_retries, 2);
    }

    #[test]
    fn expired_deadline_halts() {
        let m = Meter::new(SearchBudget { max_ss: None, deadline: Some(Duration::ZERO) });
        assert_eq!(m.ensure(1), Err(Halt::DeadlineExpired));
    }

    #[test]
    fn budget_serializes_deadline_as_millis() {
        let b = SearchBudget { max_ss: Some(5), deadline: Some(Duration::from_millis(1500)) };
        let text = serde_json::to_string(&b).unwrap();
        assert_eq!(text, r#"{"max_ss":5,"deadline":1500}"#);
        assert_eq!(serde_json::from_str::<SearchBudget>(&text).unwrap(), b);
    }
}
