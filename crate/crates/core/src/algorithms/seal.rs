//! SeaL: direct solve, decompose, prune by validity, rank, recurse. SeaL-C swaps pruning for two-phase ranking.

use std::collections::HashSet;

use super::{AblationFlag, AlgorithmConfig};
use crate::advisor::{check_validity, direct_solve, propose_decomposition, rank_states, Advisor, ValueUse};
use crate::domain::{at_depth_limit, expand, Domain};
use crate::search::{Halt, SearchState, StepKind};
use crate::session::{ExpansionLog, Session};

struct Flags {
    validity: bool,
    direct_solve: bool,
    ranking: bool,
    verifier: bool,
    rank_samples: usize,
}

impl Flags {
    fn of(cfg: &AlgorithmConfig) -> Self {
        let verifier = !cfg.has(AblationFlag::NoVerifier);
        Self {
            validity: !cfg.has(AblationFlag::NoValidity),
            direct_solve: verifier && !cfg.has(AblationFlag::NoDirectSolve),
            ranking: !cfg.has(AblationFlag::NoRanking),
            verifier,
            rank_samples: cfg.rank_samples,
        }
    }
}

enum Step<D: Domain> {
    Done(Option<D::Solution>),
    Expand(Vec<SearchState<D>>),
}

/// The part of a visit shared by both variants: terminal check, direct solve, decomposition.
fn open<D: Domain>(
    s: &mut Session<'_, D>,
    advisor: &dyn Advisor<D>,
    f: &Flags,
    state: &SearchState<D>,
) -> Result<Step<D>, Halt> {
    s.visit(&state.key);
    let (domain, goal) = (s.domain, s.goal());
    if domain.is_complete(goal, &state.payload) {
        if !f.verifier {
            let sol = domain.is_goal(goal, &state.payload).then(|| domain.path_solution(goal, state));
            return Ok(Step::Done(sol));
        }
        s.charge(StepKind::ExtVerifier, 1)?;
        let sol = domain.path_solution(goal, state);
        return Ok(Step::Done(domain.verify(goal, &sol).then_some(sol)));
    }
    if at_depth_limit(domain, goal, state) {
        return Ok(Step::Done(None));
    }
    if f.direct_solve {
        let cand = direct_solve(advisor, s, state)?;
        if let Some(answer) = &cand.parsed {
            s.charge(StepKind::ExtVerifier, 1)?;
            if let Some(sol) = domain.complete_answer(goal, state, answer) {
                if domain.verify(goal, &sol) {
                    return Ok(Step::Done(Some(sol)));
                }
            }
        }
    }
    s.charge(StepKind::ExtDecomposition, 1)?;
    Ok(Step::Expand(expand(domain, goal, state)))
}

fn order<D: Domain>(
    s: &mut Session<'_, D>,
    advisor: &dyn Advisor<D>,
    f: &Flags,
    states: &[SearchState<D>],
) -> Result<Vec<usize>, Halt> {
    if !f.ranking || states.len() < 2 {
        return Ok((0..states.len()).collect());
    }
    Ok(rank_states(advisor, s, states, f.rank_samples, ValueUse::Rank)?.ordering)
}

pub fn run_seal<D: Domain>(
    s: &mut Session<'_, D>,
    advisor: &dyn Advisor<D>,
    cfg: &AlgorithmConfig,
) -> Result<Option<D::Solution>, Halt> {
    fn visit<D: Domain>(
        s: &mut Session<'_, D>,
        advisor: &dyn Advisor<D>,
        f: &Flags,
        state: &SearchState<D>,
    ) -> Result<Option<D::Solution>, Halt> {
        let children = match open(s, advisor, f, state)? {
            Step::Done(sol) => return Ok(sol),
            Step::Expand(c) => c,
        };
        if children.is_empty() {
            return Ok(None);
        }
        let survivors: Vec<SearchState<D>> = if f.validity {
            let verdict = check_validity(advisor, s, &children)?;
            children.into_iter().enumerate().filter(|(i, _)| verdict.keep(*i)).map(|(_, c)| c).collect()
        } else {
            children
        };
        for i in order(s, advisor, f, &survivors)? {
            if let Some(sol) = visit(s, advisor, f, &survivors[i])? {
                return Ok(Some(sol));
            }
        }
        Ok(None)
    }
    let problem = s.problem;
    visit(s, advisor, &Flags::of(cfg), &problem.initial)
}

pub fn run_seal_c<D: Domain>(
    s: &mut Session<'_, D>,
    advisor: &dyn Advisor<D>,
    cfg: &AlgorithmConfig,
) -> Result<Option<D::Solution>, Halt> {
    fn visit<D: Domain>(
        s: &mut Session<'_, D>,
        advisor: &dyn Advisor<D>,
        f: &Flags,
        state: &SearchState<D>,
    ) -> Result<Option<D::Solution>, Halt> {
        let children = match open(s, advisor, f, state)? {
            Step::Done(sol) => return Ok(sol),
            Step::Expand(c) => c,
        };
        if children.is_empty() {
            return Ok(None);
        }
        let phase1 = propose_decomposition(advisor, s, state, &children)?.proposed;
        let taken: HashSet<&str> = phase1.iter().map(|c| c.key.as_str()).collect();
        let phase2: Vec<SearchState<D>> = children.iter().filter(|c| !taken.contains(c.key.as_str())).cloned().collect();
        let keys = |v: &[SearchState<D>]| v.iter().map(|c| c.key.clone()).collect::<Vec<_>>();
        s.log_expansion(ExpansionLog {
            parent: state.key.clone(),
            decomposition: keys(&children),
            phase1: keys(&phase1),
            phase2: keys(&phase2),
        });
        for phase in [phase1, phase2] {
            for i in order(s, advisor, f, &phase)? {
                if let Some(sol) = visit(s, advisor, f, &phase[i])? {
                    return Ok(Some(sol));
                }
            }
        }
        Ok(None)
    }
    let problem = s.problem;
    visit(s, advisor, &Flags::of(cfg), &problem.initial)
}
