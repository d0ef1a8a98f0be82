//! One-shot baselines: chain of thought, majority vote, best-of-N.

use crate::advisor::{Advisor, Bucket, CandidateSolution, NEUTRAL_SCORE};
use crate::domain::Domain;
use crate::search::Halt;
use crate::session::Session;

fn solutions<D: Domain>(s: &Session<'_, D>, candidates: &[CandidateSolution<D>]) -> Vec<D::Solution> {
    let root = &s.problem.initial;
    candidates
        .iter()
        .filter_map(|c| c.parsed.as_ref())
        .filter_map(|a| s.domain.complete_answer(s.goal(), root, a))
        .collect()
}

pub fn run_cot<D: Domain>(s: &mut Session<'_, D>, advisor: &dyn Advisor<D>) -> Result<Option<D::Solution>, Halt> {
    let root = s.problem.initial.clone();
    let c = advisor.sample_solutions(s, &root, 1)?;
    Ok(solutions(s, &c).into_iter().next())
}

/// The most frequent answer by normalized key; ties go to the group seen first.
pub fn run_majority_vote<D: Domain>(
    s: &mut Session<'_, D>,
    advisor: &dyn Advisor<D>,
    n: usize,
) -> Result<Option<D::Solution>, Halt> {
    let root = s.problem.initial.clone();
    let c = advisor.sample_solutions(s, &root, n)?;
    let mut groups: Vec<(String, D::Solution, usize)> = Vec::new();
    for sol in solutions(s, &c) {
        let key = s.domain.answer_key(&sol);
        match groups.iter_mut().find(|g| g.0 == key) {
            Some(g) => g.2 += 1,
            None => groups.push((key, sol, 1)),
        }
    }
    let mut best: Option<(D::Solution, usize)> = None;
    for (_, sol, count) in groups {
        if best.as_ref().is_none_or(|b| count > b.1) {
            best = Some((sol, count));
        }
    }
    Ok(best.map(|b| b.0))
}

/// Scores each parsed candidate with the advisor's judge and submits the best; ties go to the earliest.
pub fn run_best_of_n<D: Domain>(
    s: &mut Session<'_, D>,
    advisor: &dyn Advisor<D>,
    n: usize,
) -> Result<Option<D::Solution>, Halt> {
    let root = s.problem.initial.clone();
    let c = advisor.sample_solutions(s, &root, n)?;
    let sols = solutions(s, &c);
    if sols.is_empty() {
        return Ok(None);
    }
    let judged = advisor.judge_solutions(s, &sols)?;
    let score = |i: usize| judged.get(i).copied().flatten().map_or(NEUTRAL_SCORE, Bucket::score);
    let best = (0..sols.len()).fold(0, |b, i| if score(i) > score(b) { i } else { b });
    Ok(sols.into_iter().nth(best))
}
