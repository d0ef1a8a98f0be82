//! Beam search over advisor-proposed successors, optionally with a rule-verified final pick.

use std::collections::HashSet;

use super::AlgorithmConfig;
use crate::advisor::{rank_states, Advisor, ProposeUse, ValueUse};
use crate::domain::{at_depth_limit, Domain};
use crate::search::{Halt, SearchState, StepKind};
use crate::session::Session;

pub fn run_beam<D: Domain>(
    s: &mut Session<'_, D>,
    advisor: &dyn Advisor<D>,
    cfg: &AlgorithmConfig,
    rule_verify_final: bool,
) -> Result<Option<D::Solution>, Halt> {
    let domain = s.domain;
    let goal = s.goal();
    let root = s.problem.initial.clone();
    let mut pool: Vec<(f64, SearchState<D>)> = Vec::new();
    let mut beam = Vec::new();
    if domain.is_complete(goal, &root.payload) {
        pool.push((1.0, root));
    } else {
        beam.push(root);
    }

    while !beam.is_empty() {
        let mut seen = HashSet::new();
        let mut level: Vec<SearchState<D>> = Vec::new();
        for st in &beam {
            if at_depth_limit(domain, goal, st) {
                continue;
            }
            for a in advisor.propose(s, st, ProposeUse::Beam)? {
                let Some(next) = domain.apply(goal, &st.payload, &a) else { continue };
                let child = st.child(domain, a, next);
                if seen.insert(child.key.clone()) {
                    level.push(child);
                }
            }
        }
        if level.is_empty() {
            break;
        }
        let ranked = rank_states(advisor, s, &level, cfg.eval_samples, ValueUse::BeamEval)?;
        let mut next = Vec::new();
        for (pos, &i) in ranked.ordering.iter().enumerate().take(cfg.beam_width) {
            let st = level[i].clone();
            if domain.is_complete(goal, &st.payload) {
                pool.push((ranked.scores[pos], st));
            } else {
                next.push(st);
            }
        }
        beam = next;
    }

    // Stable: equal scores keep discovery order.
    pool.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut answers = pool.iter().map(|(_, st)| domain.path_solution(goal, st));
    if !rule_verify_final {
        return Ok(answers.next());
    }
    let mut first = None;
    for sol in answers {
        s.charge(StepKind::ExtVerifier, 1)?;
        if domain.verify(goal, &sol) {
            return Ok(Some(sol));
        }
        first.get_or_insert(sol);
    }
    Ok(first)
}
