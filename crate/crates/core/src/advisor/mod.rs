//! The learning boundary: direct solve, validity check, ranking, and proposed decomposition.

pub mod llm;
pub mod oracle;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::domain::Domain;
use crate::search::{Halt, SearchState, StepKind};
use crate::session::Session;

pub use llm::LlmAdvisor;
pub use oracle::{Adversarial, OracleDomain, PerfectOracle, Stochastic};

/// Number of binary samples behind every validity verdict.
pub const VALIDITY_VOTES: usize = 5;

/// Value buckets and their scores.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bucket {
    Sure,
    Likely,
    Impossible,
}

impl Bucket {
    pub fn score(self) -> f64 {
        match self {
            Bucket::Sure => 1.0,
            Bucket::Likely => 0.5,
            Bucket::Impossible => 0.1,
        }
    }

    /// The bucket on the other side of the scale.
    pub fn inverted(self) -> Bucket {
        match self {
            Bucket::Sure => Bucket::Impossible,
            Bucket::Likely => Bucket::Likely,
            Bucket::Impossible => Bucket::Sure,
        }
    }
}

/// Score used when a value sample cannot be read.
pub const NEUTRAL_SCORE: f64 = 0.5;

pub struct CandidateSolution<D: Domain> {
    pub raw_text: String,
    pub parsed: Option<D::Answer>,
    pub advisor_id: String,
}

impl<D: Domain> CandidateSolution<D> {
    pub fn empty(advisor_id: &str) -> Self {
        Self { raw_text: String::new(), parsed: None, advisor_id: advisor_id.to_string() }
    }

    /// Wraps model text, running the domain's answer parser over it.
    pub fn from_text(domain: &D, raw_text: String, advisor_id: &str) -> Self {
        let parsed = domain.parse_answer(&raw_text);
        Self { raw_text, parsed, advisor_id: advisor_id.to_string() }
    }
}

impl<D: Domain> Clone for CandidateSolution<D> {
    fn clone(&self) -> Self {
        Self { raw_text: self.raw_text.clone(), parsed: self.parsed.clone(), advisor_id: self.advisor_id.clone() }
    }
}

impl<D: Domain> fmt::Debug for CandidateSolution<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CandidateSolution")
            .field("raw_text", &self.raw_text)
            .field("parsed", &self.parsed)
            .field("advisor_id", &self.advisor_id)
            .finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StateVerdict {
    pub index: usize,
    pub keep: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidityVerdict {
    pub per_state: Vec<StateVerdict>,
    /// Per state, the raw votes; `None` marks an unreadable sample.
    pub vote_trace: Vec<Vec<Option<bool>>>,
}

impl ValidityVerdict {
    /// Strict majority per state, where unreadable samples count as keep votes.
    pub fn from_votes(votes: Vec<Vec<Option<bool>>>) -> Self {
        let per_state = votes
            .iter()
            .enumerate()
            .map(|(index, v)| {
                let keeps = v.iter().filter(|x| x.unwrap_or(true)).count();
                StateVerdict { index, keep: v.is_empty() || 2 * keeps > v.len() }
            })
            .collect();
        Self { per_state, vote_trace: votes }
    }

    pub fn keep(&self, index: usize) -> bool {
        self.per_state[index].keep
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankedStates {
    /// A permutation of input indices, best first.
    pub ordering: Vec<usize>,
    /// `scores[k]` belongs to `ordering[k]`.
    pub scores: Vec<f64>,
}

impl RankedStates {
    /// Stable descending sort of per-input scores.
    pub fn from_scores(per_input: &[f64]) -> Self {
        let mut ordering: Vec<usize> = (0..per_input.len()).collect();
        ordering.sort_by(|a, b| per_input[*b].total_cmp(&per_input[*a]));
        let scores = ordering.iter().map(|i| per_input[*i]).collect();
        Self { ordering, scores }
    }

    /// Keeps the input order; every score neutral.
    pub fn identity(n: usize) -> Self {
        Self { ordering: (0..n).collect(), scores: vec![NEUTRAL_SCORE; n] }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProposalSource {
    Advisor,
    Fallback,
}

pub struct ProposedDecomposition<D: Domain> {
    pub proposed: Vec<SearchState<D>>,
    pub source: ProposalSource,
}

impl<D: Domain> fmt::Debug for ProposedDecomposition<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let keys: Vec<&str> = self.proposed.iter().map(|s| s.key.as_str()).collect();
        f.debug_struct("ProposedDecomposition").field("proposed", &keys).field("source", &self.source).finish()
    }
}

/// Which prompt family a value request belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValueUse {
    Rank,
    BeamEval,
}

/// Which prompt family a proposal request belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProposeUse {
    Decompose,
    Beam,
}

/// The four advisory capabilities plus the solution judge used by best-of-N.
///
/// Implementations charge the session for every model call they issue (or, for the
/// offline families, every call they stand in for) before returning its result.
pub trait Advisor<D: Domain>: Send + Sync {
    fn id(&self) -> String;

    /// Seed of the per-run random stream.
    fn seed(&self) -> u64 {
        0
    }

    fn sample_solutions(
        &self,
        s: &mut Session<'_, D>,
        state: &SearchState<D>,
        n: usize,
    ) -> Result<Vec<CandidateSolution<D>>, Halt>;

    /// `k` votes for each state of the batch.
    fn validity_votes(
        &self,
        s: &mut Session<'_, D>,
        states: &[SearchState<D>],
        k: usize,
    ) -> Result<Vec<Vec<Option<bool>>>, Halt>;

    /// `m` value samples for each state.
    fn value_samples(
        &self,
        s: &mut Session<'_, D>,
        states: &[SearchState<D>],
        m: usize,
        usage: ValueUse,
    ) -> Result<Vec<Vec<Option<Bucket>>>, Halt>;

    /// Raw proposed actions at `state`; not yet checked against the decomposition.
    fn propose(&self, s: &mut Session<'_, D>, state: &SearchState<D>, usage: ProposeUse) -> Result<Vec<D::Action>, Halt>;

    /// One value judgement per full candidate solution.
    fn judge_solutions(&self, s: &mut Session<'_, D>, candidates: &[D::Solution]) -> Result<Vec<Option<Bucket>>, Halt>;
}

pub fn direct_solve<D: Domain>(
    advisor: &dyn Advisor<D>,
    s: &mut Session<'_, D>,
    state: &SearchState<D>,
) -> Result<CandidateSolution<D>, Halt> {
    let mut v = advisor.sample_solutions(s, state, 1)?;
    Ok(if v.is_empty() { CandidateSolution::empty(&advisor.id()) } else { v.swap_remove(0) })
}

pub fn check_validity<D: Domain>(
    advisor: &dyn Advisor<D>,
    s: &mut Session<'_, D>,
    states: &[SearchState<D>],
) -> Result<ValidityVerdict, Halt> {
    let mut votes = advisor.validity_votes(s, states, VALIDITY_VOTES)?;
    votes.resize(states.len(), Vec::new());
    Ok(ValidityVerdict::from_votes(votes))
}

pub fn rank_states<D: Domain>(
    advisor: &dyn Advisor<D>,
    s: &mut Session<'_, D>,
    states: &[SearchState<D>],
    samples: usize,
    usage: ValueUse,
) -> Result<RankedStates, Halt> {
    let raw = advisor.value_samples(s, states, samples.max(1), usage)?;
    let scores: Vec<f64> = (0..states.len())
        .map(|i| match raw.get(i) {
            Some(v) if !v.is_empty() => {
                v.iter().map(|b| b.map_or(NEUTRAL_SCORE, Bucket::score)).sum::<f64>() / v.len() as f64
            }
            _ => NEUTRAL_SCORE,
        })
        .collect();
    Ok(RankedStates::from_scores(&scores))
}

/// Keeps proposed actions whose successors belong to `children`, deduplicated, in proposal order.
pub fn filter_proposal<D: Domain>(
    domain: &D,
    goal: &D::Goal,
    state: &SearchState<D>,
    actions: &[D::Action],
    children: &[SearchState<D>],
) -> ProposedDecomposition<D> {
    let mut seen = HashSet::new();
    let mut proposed = Vec::new();
    for a in actions {
        let Some(next) = domain.apply(goal, &state.payload, a) else { continue };
        let key = domain.canonical_key(&next);
        if !seen.insert(key.clone()) {
            continue;
        }
        if let Some(child) = children.iter().find(|c| c.key == key) {
            proposed.push(child.clone());
        }
    }
    let source = if proposed.is_empty() { ProposalSource::Fallback } else { ProposalSource::Advisor };
    ProposedDecomposition { proposed, source }
}

pub fn propose_decomposition<D: Domain>(
    advisor: &dyn Advisor<D>,
    s: &mut Session<'_, D>,
    state: &SearchState<D>,
    children: &[SearchState<D>],
) -> Result<ProposedDecomposition<D>, Halt> {
    let actions = advisor.propose(s, state, ProposeUse::Decompose)?;
    Ok(filter_proposal(s.domain, s.goal(), state, &actions, children))
}

/// No candidates, every state kept, neutral scores, no proposals.
#[derive(Clone, Copy, Debug, Default)]
pub struct NullAdvisor;

impl<D: Domain> Advisor<D> for NullAdvisor {
    fn id(&self) -> String {
        "null".into()
    }

    fn sample_solutions(
        &self,
        s: &mut Session<'_, D>,
        _state: &SearchState<D>,
        n: usize,
    ) -> Result<Vec<CandidateSolution<D>>, Halt> {
        s.charge(StepKind::LlmAnswerer, n as u64)?;
        Ok((0..n).map(|_| CandidateSolution::empty("null")).collect())
    }

    fn validity_votes(
        &self,
        s: &mut Session<'_, D>,
        states: &[SearchState<D>],
        k: usize,
    ) -> Result<Vec<Vec<Option<bool>>>, Halt> {
        s.charge(StepKind::LlmValidity, k as u64)?;
        Ok(vec![vec![Some(true); k]; states.len()])
    }

    fn value_samples(
        &self,
        s: &mut Session<'_, D>,
        states: &[SearchState<D>],
        m: usize,
        _usage: ValueUse,
    ) -> Result<Vec<Vec<Option<Bucket>>>, Halt> {
        s.charge(StepKind::LlmRanking, (states.len() * m) as u64)?;
        Ok(vec![vec![Some(Bucket::Likely); m]; states.len()])
    }

    fn propose(&self, s: &mut Session<'_, D>, _state: &SearchState<D>, _usage: ProposeUse) -> Result<Vec<D::Action>, Halt> {
        s.charge(StepKind::LlmAnswerer, 1)?;
        Ok(Vec::new())
    }

    fn judge_solutions(&self, s: &mut Session<'_, D>, candidates: &[D::Solution]) -> Result<Vec<Option<Bucket>>, Halt> {
        if !candidates.is_empty() {
            s.charge(StepKind::LlmRanking, candidates.len() as u64)?;
        }
        Ok(vec![Some(Bucket::Likely); candidates.len()])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn majority_with_fail_open() {
        let v = ValidityVerdict::from_votes(vec![
            vec![Some(true), Some(false), Some(false), Some(true), Some(true)],
            vec![Some(false), Some(false), Some(false), Some(true), Some(true)],
            vec![None; 5],
            vec![None, None, Some(false), Some(false), Some(false)],
        ]);
        assert_eq!(v.per_state.iter().map(|p| p.keep).collect::<Vec<_>>(), [true, false, true, false]);
        assert_eq!(v.per_state.iter().map(|p| p.index).collect::<Vec<_>>(), [0, 1, 2, 3]);
    }

    #[test]
    fn ranking_is_stable() {
        let r = RankedStates::from_scores(&[0.5, 1.0, 0.5, 0.1, 1.0]);
        assert_eq!(r.ordering, [1, 4, 0, 2, 3]);
        assert_eq!(r.scores, [1.0, 1.0, 0.5, 0.5, 0.1]);
        let r = RankedStates::from_scores(&[0.5, 0.5]);
        assert_eq!(r.ordering, [0, 1]);
    }

    #[test]
    fn bucket_scores() {
        assert_eq!(Bucket::Sure.score(), 1.0);
        assert_eq!(Bucket::Likely.score(), 0.5);
        assert_eq!(Bucket::Impossible.score(), 0.1);
        assert_eq!(Bucket::Sure.inverted(), Bucket::Impossible);
    }
}
