//! Uninformed searches over the complete decomposition.

use std::collections::{HashSet, VecDeque};

use crate::domain::{at_depth_limit, expand, Domain};
use crate::search::{Halt, SearchState, StepKind};
use crate::session::Session;

/// Charges a visit and, for a complete state, a verifier check.
/// Returns the accepted solution, or whether the state may be expanded.
fn visit<D: Domain>(s: &mut Session<'_, D>, state: &SearchState<D>) -> Result<Result<D::Solution, bool>, Halt> {
    s.visit(&state.key);
    s.charge(StepKind::ExtTraversedStates, 1)?;
    let goal = s.goal();
    if s.domain.is_complete(goal, &state.payload) {
        s.charge(StepKind::ExtVerifier, 1)?;
        let sol = s.domain.path_solution(goal, state);
        return Ok(if s.domain.verify(goal, &sol) { Ok(sol) } else { Err(false) });
    }
    Ok(Err(!at_depth_limit(s.domain, goal, state)))
}

fn children<D: Domain>(s: &mut Session<'_, D>, state: &SearchState<D>) -> Result<Vec<SearchState<D>>, Halt> {
    s.charge(StepKind::ExtDecomposition, 1)?;
    Ok(expand(s.domain, s.goal(), state))
}

/// Walks the whole tree without early exit; reports the first solution found.
pub fn run_exhaustive<D: Domain>(s: &mut Session<'_, D>) -> Result<Option<D::Solution>, Halt> {
    fn walk<D: Domain>(s: &mut Session<'_, D>, state: &SearchState<D>, found: &mut Option<D::Solution>) -> Result<(), Halt> {
        match visit(s, state)? {
            Ok(sol) => {
                found.get_or_insert(sol);
            }
            Err(true) => {
                for c in children(s, state)? {
                    walk(s, &c, found)?;
                }
            }
            Err(false) => {}
        }
        Ok(())
    }
    let mut found = None;
    let problem = s.problem;
    walk(s, &problem.initial, &mut found)?;
    Ok(found)
}

/// Depth-first in canonical child order; `prune` skips canonical keys already visited.
pub fn run_dfs<D: Domain>(s: &mut Session<'_, D>, prune: bool) -> Result<Option<D::Solution>, Halt> {
    fn walk<D: Domain>(
        s: &mut Session<'_, D>,
        state: &SearchState<D>,
        seen: &mut Option<HashSet<String>>,
    ) -> Result<Option<D::Solution>, Halt> {
        if let Some(seen) = seen {
            if !seen.insert(state.key.clone()) {
                return Ok(None);
            }
        }
        match visit(s, state)? {
            Ok(sol) => Ok(Some(sol)),
            Err(true) => {
                for c in children(s, state)? {
                    if let Some(sol) = walk(s, &c, seen)? {
                        return Ok(Some(sol));
                    }
                }
                Ok(None)
            }
            Err(false) => Ok(None),
        }
    }
    let mut seen = prune.then(HashSet::new);
    let problem = s.problem;
    walk(s, &problem.initial, &mut seen)
}

/// Level-order search; `prune` drops children whose key was already generated.
pub fn run_bfs<D: Domain>(s: &mut Session<'_, D>, prune: bool) -> Result<Option<D::Solution>, Halt> {
    let root = s.problem.initial.clone();
    let mut seen = HashSet::from([root.key.clone()]);
    let mut queue = VecDeque::from([root]);
    while let Some(state) = queue.pop_front() {
        match visit(s, &state)? {
            Ok(sol) => return Ok(Some(sol)),
            Err(true) => {
                for c in children(s, &state)? {
                    if !prune || seen.insert(c.key.clone()) {
                        queue.push_back(c);
                    }
                }
            }
            Err(false) => {}
        }
    }
    Ok(None)
}
