//! Difficulty levels.

use crate::domain::{Domain, PlanningProblem};

/// Splits items into three levels by `(rank, index)`. Sizes differ by at most one,
/// larger levels first. Returns the level (1..=3) of each item in input order.
pub fn tercile_levels(keys: &[(u32, usize)]) -> Vec<u32> {
    let n = keys.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| keys[i]);
    let (base, extra) = (n / 3, n % 3);
    let mut levels = vec![0; n];
    let mut pos = 0;
    for level in 0..3 {
        let size = base + usize::from(level < extra);
        for &i in &order[pos..pos + size] {
            levels[i] = level as u32 + 1;
        }
        pos += size;
    }
    levels
}

/// Level of `rank` given increasing cut points: ranks up to `cuts[0]` are level 1, and so on.
pub fn cut_level(rank: u32, cuts: &[u32]) -> u32 {
    cuts.iter().take_while(|c| rank > **c).count() as u32 + 1
}

/// One level per problem. Ranked problems use terciles (or `cuts`); otherwise the minimum
/// plan length is the level; problems with neither get none.
pub fn assign_levels<D: Domain>(problems: &[PlanningProblem<D>], cuts: Option<&[u32]>) -> Vec<Option<u32>> {
    let ranked: Vec<(usize, (u32, usize))> = problems
        .iter()
        .enumerate()
        .filter_map(|(i, p)| p.meta.difficulty_rank.map(|r| (i, (r, p.meta.source_index.unwrap_or(i)))))
        .collect();
    let mut out: Vec<Option<u32>> = problems.iter().map(|p| p.meta.min_steps.map(|m| m as u32)).collect();
    let levels = match cuts {
        Some(c) => ranked.iter().map(|(_, (r, _))| cut_level(*r, c)).collect(),
        None => tercile_levels(&ranked.iter().map(|(_, k)| *k).collect::<Vec<_>>()),
    };
    for ((i, _), l) in ranked.iter().zip(levels) {
        out[*i] = Some(l);
    }
    out
}
