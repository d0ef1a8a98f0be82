//! The interface every benchmark domain implements.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::ParseError;
use crate::search::SearchState;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainKind {
    Game24,
    Crosswords,
    Blocksworld,
}

impl DomainKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DomainKind::Game24 => "game24",
            DomainKind::Crosswords => "crosswords",
            DomainKind::Blocksworld => "blocksworld",
        }
    }
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DomainKind {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "game24" | "game_of_24" | "24" => Ok(DomainKind::Game24),
            "crosswords" | "mini_crosswords" => Ok(DomainKind::Crosswords),
            "blocksworld" => Ok(DomainKind::Blocksworld),
            other => Err(ParseError::new(format!("unknown domain kind `{other}`"))),
        }
    }
}

/// A stateless domain handle.
///
/// Problem-specific data (input numbers, clue lists, goal predicates) lives in
/// [`Domain::Goal`]; states only carry what changes during search.
pub trait Domain: Send + Sync + Sized + 'static {
    type State: Clone + fmt::Debug + PartialEq + Send + Sync;
    type Action: Clone + fmt::Debug + PartialEq + Send + Sync;
    type Goal: fmt::Debug + Send + Sync;
    /// What an advisor hands back from a direct-solve attempt at some state.
    type Answer: Clone + fmt::Debug + Send + Sync;
    /// A full solution of the original problem, as checked by the rule verifier.
    type Solution: Clone + fmt::Debug + PartialEq + Serialize + DeserializeOwned + Send + Sync;

    const KIND: DomainKind;

    /// Deterministic and equal for domain-equivalent states.
    fn canonical_key(&self, state: &Self::State) -> String;

    fn is_goal(&self, goal: &Self::Goal, state: &Self::State) -> bool;

    /// True when the path to `state` is a finished candidate worth handing to the verifier.
    /// Complete states are never expanded.
    fn is_complete(&self, goal: &Self::Goal, state: &Self::State) -> bool;

    /// The complete decomposition D(s), deduplicated by canonical key, in canonical order.
    fn decompose(&self, goal: &Self::Goal, state: &Self::State) -> Vec<(Self::Action, Self::State)>;

    /// Transition function. `None` when the action is not applicable.
    fn apply(&self, goal: &Self::Goal, state: &Self::State, action: &Self::Action) -> Option<Self::State>;

    /// Maximum path length explored by search, when the state space is not acyclic.
    fn depth_limit(&self, _goal: &Self::Goal) -> Option<usize> {
        None
    }

    /// The solution described by the path that reached `state`.
    fn path_solution(&self, goal: &Self::Goal, state: &SearchState<Self>) -> Self::Solution;

    /// Turns an advisor answer given at `state` into a solution of the original problem.
    fn complete_answer(
        &self,
        goal: &Self::Goal,
        state: &SearchState<Self>,
        answer: &Self::Answer,
    ) -> Option<Self::Solution>;

    /// The rule verifier.
    fn verify(&self, goal: &Self::Goal, solution: &Self::Solution) -> bool;

    /// Extracts an answer from model output; absent on no match.
    fn parse_answer(&self, text: &str) -> Option<Self::Answer>;

    /// Renders an answer in the form `parse_answer` reads.
    fn render_answer(&self, answer: &Self::Answer) -> String;

    /// Normalized string used to group equal answers.
    fn answer_key(&self, solution: &Self::Solution) -> String;

    fn format_action(&self, action: &Self::Action) -> String;

    fn parse_action(&self, label: &str) -> Result<Self::Action, ParseError>;

    /// Human-readable state rendering used in prompts.
    fn render_state(&self, goal: &Self::Goal, state: &Self::State) -> String;

    /// Evaluation metrics for a solution beyond pass/fail. Never charged.
    fn grade(&self, _goal: &Self::Goal, _solution: &Self::Solution) -> BTreeMap<String, f64> {
        BTreeMap::new()
    }
}

/// Metadata carried alongside a problem.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ProblemMeta {
    pub source_index: Option<usize>,
    pub difficulty_rank: Option<u32>,
    /// Human success rate in percent, where the dataset provides one.
    pub solved_rate: Option<f64>,
    pub min_steps: Option<usize>,
}

/// One benchmark instance: initial state plus everything needed to check the goal.
pub struct PlanningProblem<D: Domain> {
    pub id: String,
    pub initial: SearchState<D>,
    pub goal: D::Goal,
    pub meta: ProblemMeta,
}

impl<D: Domain> PlanningProblem<D> {
    pub fn new(domain: &D, id: impl Into<String>, initial: D::State, goal: D::Goal) -> Self {
        Self { id: id.into(), initial: SearchState::root(domain, initial), goal, meta: ProblemMeta::default() }
    }

    pub fn with_meta(mut self, meta: ProblemMeta) -> Self {
        self.meta = meta;
        self
    }

    pub fn kind(&self) -> DomainKind {
        D::KIND
    }
}

impl<D: Domain> fmt::Debug for PlanningProblem<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PlanningProblem")
            .field("id", &self.id)
            .field("initial", &self.initial.key)
            .field("goal", &self.goal)
            .finish()
    }
}

/// Children of `state` as search states, with the depth limit applied.
pub fn expand<D: Domain>(domain: &D, goal: &D::Goal, state: &SearchState<D>) -> Vec<SearchState<D>> {
    if let Some(limit) = domain.depth_limit(goal) {
        if state.depth() >= limit {
            return Vec::new();
        }
    }
    domain
        .decompose(goal, &state.payload)
        .into_iter()
        .map(|(a, s)| state.child(domain, a, s))
        .collect()
}

/// True when the depth limit forbids expanding `state`.
pub fn at_depth_limit<D: Domain>(domain: &D, goal: &D::Goal, state: &SearchState<D>) -> bool {
    domain.depth_limit(goal).is_some_and(|l| state.depth() >= l)
}

/// Replays `state.path` from `initial`; `None` if some action is inapplicable.
pub fn replay<D: Domain>(domain: &D, goal: &D::Goal, initial: &D::State, path: &[D::Action]) -> Option<D::State> {
    path.iter().try_fold(initial.clone(), |s, a| domain.apply(goal, &s, a))
}
