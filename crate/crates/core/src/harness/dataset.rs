//! Dataset ingestion for the three domains.

use std::path::Path;

use serde::Deserialize;

use crate::domain::{PlanningProblem, ProblemMeta};
use crate::domains::blocksworld::{BlocksRecord, Blocksworld};
use crate::domains::crosswords::{Crosswords, CrosswordsGoal};
use crate::domains::game24::Game24;
use crate::error::Error;

/// Problems plus non-fatal findings such as recomputed step counts that disagree with the file.
pub struct Loaded<D: crate::domain::Domain> {
    pub problems: Vec<PlanningProblem<D>>,
    pub warnings: Vec<String>,
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::dataset(path, "file", e.to_string()))
}

fn parse_percent(text: &str) -> Option<f64> {
    text.trim().trim_end_matches('%').trim().parse().ok()
}

fn parse_puzzle(text: &str) -> Result<Vec<i64>, String> {
    let nums: Vec<i64> = text
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| format!("`{t}` is not an integer")))
        .collect::<Result<_, _>>()?;
    if nums.len() != 4 {
        return Err(format!("expected four numbers, got {}", nums.len()));
    }
    Ok(nums)
}

/// Reads either the `index,puzzle,difficulty_rank` layout or the ranked puzzle table
/// (`Rank,Puzzles,...,Solved rate,...`), where the row position is the index.
pub fn load_game24_str(path: &Path, text: &str) -> Result<Loaded<Game24>, Error> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| Error::dataset(path, "header", e.to_string()))?.clone();
    let col = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let puzzle = col("puzzle").or_else(|| col("puzzles"));
    let rank = col("difficulty_rank").or_else(|| col("rank"));
    let index = col("index");
    let rate = col("solved rate").or_else(|| col("solved_rate"));
    let Some(puzzle) = puzzle else {
        return Err(Error::dataset(path, "header", "no `puzzle` column"));
    };
    let mut problems = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let loc = |field: &str| format!("row {row}, field `{field}`");
        let rec = rec.map_err(|e| Error::dataset(path, format!("row {row}"), e.to_string()))?;
        let nums = parse_puzzle(rec.get(puzzle).unwrap_or("")).map_err(|m| Error::dataset(path, loc("puzzle"), m))?;
        let idx = match index {
            Some(c) => rec
                .get(c)
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::dataset(path, loc("index"), "not a non-negative integer"))?,
            None => row,
        };
        let difficulty_rank = match rank {
            Some(c) => Some(
                rec.get(c)
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| Error::dataset(path, loc("difficulty_rank"), "not a non-negative integer"))?,
            ),
            None => None,
        };
        let solved_rate = rate.and_then(|c| rec.get(c)).and_then(parse_percent);
        let meta = ProblemMeta { source_index: Some(idx), difficulty_rank, solved_rate, min_steps: None };
        problems.push(Game24.problem_with_meta(format!("game24/{idx}"), &nums, meta));
    }
    Ok(Loaded { problems, warnings: Vec::new() })
}

pub fn load_game24(path: &Path) -> Result<Loaded<Game24>, Error> {
    load_game24_str(path, &read(path)?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CrosswordsRow {
    clues: Vec<String>,
    candidates: Vec<Vec<String>>,
    #[serde(default)]
    ground_truth: Option<Vec<String>>,
}

fn json_rows<T: serde::de::DeserializeOwned>(path: &Path, text: &str) -> Result<Vec<T>, Error> {
    let raw: Vec<serde_json::Value> =
        serde_json::from_str(text).map_err(|e| Error::dataset(path, "top level", format!("expected a JSON array: {e}")))?;
    raw.into_iter()
        .enumerate()
        .map(|(i, v)| serde_json::from_value(v).map_err(|e| Error::dataset(path, format!("row {i}"), e.to_string())))
        .collect()
}

pub fn load_crosswords_str(path: &Path, text: &str) -> Result<Loaded<Crosswords>, Error> {
    let rows: Vec<CrosswordsRow> = json_rows(path, text)?;
    let mut problems = Vec::with_capacity(rows.len());
    for (i, r) in rows.into_iter().enumerate() {
        let goal = CrosswordsGoal::new(r.clues, r.candidates, r.ground_truth)
            .map_err(|e| Error::dataset(path, format!("row {i}"), e.0))?;
        let meta = ProblemMeta { source_index: Some(i), ..Default::default() };
        problems.push(Crosswords.problem_with_meta(format!("crosswords/{i}"), goal, meta));
    }
    Ok(Loaded { problems, warnings: Vec::new() })
}

pub fn load_crosswords(path: &Path) -> Result<Loaded<Crosswords>, Error> {
    load_crosswords_str(path, &read(path)?)
}

/// The stored `min_steps` is replaced by the recomputed shortest plan length; disagreements become warnings.
pub fn load_blocksworld_str(path: &Path, text: &str) -> Result<Loaded<Blocksworld>, Error> {
    let rows: Vec<BlocksRecord> = json_rows(path, text)?;
    let mut problems = Vec::with_capacity(rows.len());
    let mut warnings = Vec::new();
    for (i, r) in rows.into_iter().enumerate() {
        let goal = r.to_goal().map_err(|e| Error::dataset(path, format!("row {i}"), e.0))?;
        if goal.min_steps != r.min_steps {
            warnings.push(format!("row {i}: min_steps is {} in the file, recomputed {}", r.min_steps, goal.min_steps));
        }
        let meta = ProblemMeta { source_index: Some(i), min_steps: Some(goal.min_steps), ..Default::default() };
        problems.push(Blocksworld.problem_with_meta(format!("blocksworld/{i}"), goal, meta));
    }
    Ok(Loaded { problems, warnings })
}

pub fn load_blocksworld(path: &Path) -> Result<Loaded<Blocksworld>, Error> {
    load_blocksworld_str(path, &read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> &'static Path {
        Path::new("mem")
    }

    #[test]
    fn both_game24_layouts() {
        let a = load_game24_str(p(), "index,puzzle,difficulty_rank\n7,1 2 3 4,12\n").unwrap();
        assert_eq!(a.problems[0].id, "game24/7");
        assert_eq!(a.problems[0].meta.difficulty_rank, Some(12));
        let b = load_game24_str(p(), "Rank,Puzzles,AMT (s),Solved rate\n5,4 4 6 8,3.1,97.50%\n").unwrap();
        assert_eq!(b.problems[0].id, "game24/0");
        assert_eq!(b.problems[0].meta.solved_rate, Some(97.5));
    }

    #[test]
    fn game24_errors_name_row_and_field() {
        let Err(Error::Dataset { location, .. }) = load_game24_str(p(), "index,puzzle,difficulty_rank\n0,1 2 3,4\n") else {
            panic!("expected a dataset error")
        };
        assert_eq!(location, "row 0, field `puzzle`");
    }

    #[test]
    fn malformed_candidate_list_is_rejected() {
        let clues: Vec<String> = (0..10).map(|i| format!("clue {i}")).collect();
        let mut cands: Vec<Vec<String>> = (0..10).map(|_| vec!["ABCDE".to_string()]).collect();
        cands[3] = vec!["TOOLONG".into()];
        let text = serde_json::json!([{ "clues": clues, "candidates": cands }]).to_string();
        let err = load_crosswords_str(p(), &text).err().unwrap().to_string();
        assert!(err.contains("row 0") && err.contains("candidates[3]"), "{err}");
    }

    #[test]
    fn blocksworld_min_steps_are_recomputed() {
        let text = r#"[{"blocks":["A","B"],"init":["ontable A","ontable B"],"goal":["on A B"],"min_steps":5}]"#;
        let l = load_blocksworld_str(p(), text).unwrap();
        assert_eq!(l.problems[0].meta.min_steps, Some(2));
        assert_eq!(l.warnings.len(), 1);
    }
}
