//! 5x5 mini crosswords where every clue comes with a list of candidate words.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use regex::Regex;

use crate::domain::{Domain, DomainKind, PlanningProblem, ProblemMeta};
use crate::error::ParseError;
use crate::search::SearchState;
use crate::text::strip_markdown;

pub const SIZE: usize = 5;
pub const SLOTS: usize = 2 * SIZE;

/// Slot indices in fill order: h1, v1, h2, v2, ..., h5, v5.
pub const FILL_ORDER: [usize; SLOTS] = [0, 5, 1, 6, 2, 7, 3, 8, 4, 9];

/// Slot `0..5` is h1..h5, slot `5..10` is v1..v5.
pub fn slot_name(slot: usize) -> String {
    if slot < SIZE {
        format!("h{}", slot + 1)
    } else {
        format!("v{}", slot - SIZE + 1)
    }
}

pub fn parse_slot(name: &str) -> Result<usize, ParseError> {
    let name = name.trim().to_ascii_lowercase();
    let bad = || ParseError::new(format!("unknown clue id `{name}`"));
    let (dir, idx) = name.split_at(1.min(name.len()));
    let i: usize = idx.parse().map_err(|_| bad())?;
    if !(1..=SIZE).contains(&i) {
        return Err(bad());
    }
    match dir {
        "h" => Ok(i - 1),
        "v" => Ok(SIZE + i - 1),
        _ => Err(bad()),
    }
}

/// Cell `(row, col)` covered by position `k` of `slot`'s word.
fn cell(slot: usize, k: usize) -> (usize, usize) {
    if slot < SIZE {
        (slot, k)
    } else {
        (k, slot - SIZE)
    }
}

fn is_word(w: &str) -> bool {
    w.len() == SIZE && w.bytes().all(|b| b.is_ascii_uppercase())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrosswordsGoal {
    pub clues: Vec<String>,
    pub candidates: Vec<Vec<String>>,
    /// Five rows of five letters, when known.
    pub ground_truth: Option<Vec<String>>,
}

impl CrosswordsGoal {
    /// Validates shapes and normalizes words to upper case.
    pub fn new(
        clues: Vec<String>,
        candidates: Vec<Vec<String>>,
        ground_truth: Option<Vec<String>>,
    ) -> Result<Self, ParseError> {
        if clues.len() != SLOTS {
            return Err(ParseError::new(format!("expected {SLOTS} clues, got {}", clues.len())));
        }
        if candidates.len() != SLOTS {
            return Err(ParseError::new(format!("expected {SLOTS} candidate lists, got {}", candidates.len())));
        }
        let mut lists = Vec::with_capacity(SLOTS);
        for (slot, list) in candidates.into_iter().enumerate() {
            if list.is_empty() {
                return Err(ParseError::new(format!("candidates[{slot}] ({}) is empty", slot_name(slot))));
            }
            let mut clean: Vec<String> = Vec::with_capacity(list.len());
            for w in list {
                let w = w.trim().to_ascii_uppercase();
                if !is_word(&w) {
                    return Err(ParseError::new(format!(
                        "candidates[{slot}] ({}) has `{w}`, not a 5-letter word",
                        slot_name(slot)
                    )));
                }
                if !clean.contains(&w) {
                    clean.push(w);
                }
            }
            lists.push(clean);
        }
        let ground_truth = match ground_truth {
            Some(rows) => Some(normalize_grid(&rows)?),
            None => None,
        };
        Ok(Self { clues, candidates: lists, ground_truth })
    }
}

/// Upper-cases and checks a 5x5 letter grid.
pub fn normalize_grid(rows: &[String]) -> Result<Vec<String>, ParseError> {
    if rows.len() != SIZE {
        return Err(ParseError::new(format!("expected {SIZE} grid rows, got {}", rows.len())));
    }
    rows.iter()
        .map(|r| {
            let r: String = r.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_uppercase();
            if is_word(&r) {
                Ok(r)
            } else {
                Err(ParseError::new(format!("grid row `{r}` is not 5 letters")))
            }
        })
        .collect()
}

/// Words read off a full grid, in slot order.
pub fn grid_words(grid: &[String]) -> Vec<String> {
    let rows: Vec<&[u8]> = grid.iter().map(|r| r.as_bytes()).collect();
    let mut out: Vec<String> = grid.to_vec();
    for c in 0..SIZE {
        out.push(rows.iter().map(|r| r[c] as char).collect());
    }
    out
}

/// Letter-, word-, and game-level agreement between two full grids.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrosswordScore {
    pub letter: f64,
    pub word: f64,
    pub game: f64,
}

pub fn crosswords_score(solution: &[String], truth: &[String]) -> CrosswordScore {
    let letters = solution
        .iter()
        .zip(truth)
        .map(|(a, b)| a.bytes().zip(b.bytes()).filter(|(x, y)| x == y).count())
        .sum::<usize>();
    let words = grid_words(solution).iter().zip(grid_words(truth).iter()).filter(|(a, b)| a == b).count();
    let total = SIZE * SIZE;
    CrosswordScore {
        letter: letters as f64 / total as f64,
        word: words as f64 / SLOTS as f64,
        game: if letters == total { 1.0 } else { 0.0 },
    }
}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct CrosswordsState {
    words: [Option<String>; SLOTS],
}

impl CrosswordsState {
    pub fn word(&self, slot: usize) -> Option<&str> {
        self.words[slot].as_deref()
    }

    pub fn assigned(&self) -> usize {
        self.words.iter().filter(|w| w.is_some()).count()
    }

    pub fn next_slot(&self) -> Option<usize> {
        FILL_ORDER.iter().copied().find(|s| self.words[*s].is_none())
    }

    pub fn letter(&self, row: usize, col: usize) -> Option<u8> {
        if let Some(w) = &self.words[row] {
            return Some(w.as_bytes()[col]);
        }
        self.words[SIZE + col].as_ref().map(|w| w.as_bytes()[row])
    }

    /// True when `word` agrees with every letter already placed along `slot`.
    pub fn fits(&self, slot: usize, word: &str) -> bool {
        is_word(word)
            && word.bytes().enumerate().all(|(k, b)| {
                let (r, c) = cell(slot, k);
                self.letter(r, c).is_none_or(|x| x == b)
            })
    }

    pub fn with(&self, slot: usize, word: &str) -> Self {
        let mut next = self.clone();
        next.words[slot] = Some(word.to_string());
        next
    }

    /// Rows with `_` for empty cells.
    pub fn rows(&self) -> Vec<String> {
        (0..SIZE)
            .map(|r| (0..SIZE).map(|c| self.letter(r, c).map_or('_', |b| b as char)).collect())
            .collect()
    }
}

impl fmt::Debug for CrosswordsState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CrosswordsState({})", self.rows().join("/"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrosswordsAction {
    pub slot: usize,
    pub word: String,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Crosswords;

impl Crosswords {
    pub fn problem(&self, id: impl Into<String>, goal: CrosswordsGoal) -> PlanningProblem<Self> {
        PlanningProblem::new(self, id, CrosswordsState::default(), goal)
    }

    pub fn problem_with_meta(&self, id: impl Into<String>, goal: CrosswordsGoal, meta: ProblemMeta) -> PlanningProblem<Self> {
        self.problem(id, goal).with_meta(meta)
    }

    /// Clue and candidate lines shown to a model.
    pub fn render_clues(&self, goal: &CrosswordsGoal) -> String {
        (0..SLOTS)
            .map(|s| format!("{}. {}; candidates: {}", slot_name(s), goal.clues[s], goal.candidates[s].join(", ")))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

fn action_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?i)^\s*([hv][1-5])\s*[=:.]\s*([a-z]{5})\s*$").expect("valid action regex"))
}

fn output_rows(text: &str) -> Option<Vec<String>> {
    let lower = text.to_ascii_lowercase();
    let start = lower.rfind("output:")? + "output:".len();
    let mut rows = Vec::new();
    for line in text[start..].lines() {
        let line = strip_markdown(line);
        if line.is_empty() {
            if rows.is_empty() {
                continue;
            }
            break;
        }
        let compact: String = line.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.len() == SIZE && compact.chars().all(|c| c.is_ascii_alphabetic()) {
            rows.push(compact.to_ascii_uppercase());
            if rows.len() == SIZE {
                return Some(rows);
            }
        } else {
            break;
        }
    }
    None
}

impl Domain for Crosswords {
    type State = CrosswordsState;
    type Action = CrosswordsAction;
    type Goal = CrosswordsGoal;
    type Answer = Vec<String>;
    type Solution = Vec<String>;

    const KIND: DomainKind = DomainKind::Crosswords;

    fn canonical_key(&self, state: &CrosswordsState) -> String {
        state.words.iter().map(|w| w.as_deref().unwrap_or("_____")).collect::<Vec<_>>().join(" ")
    }

    fn is_goal(&self, _goal: &CrosswordsGoal, state: &CrosswordsState) -> bool {
        state.assigned() == SLOTS
    }

    fn is_complete(&self, _goal: &CrosswordsGoal, state: &CrosswordsState) -> bool {
        state.assigned() == SLOTS
    }

    fn decompose(&self, goal: &CrosswordsGoal, state: &CrosswordsState) -> Vec<(CrosswordsAction, CrosswordsState)> {
        let Some(slot) = state.next_slot() else {
            return Vec::new();
        };
        goal.candidates[slot]
            .iter()
            .filter(|w| state.fits(slot, w))
            .map(|w| (CrosswordsAction { slot, word: w.clone() }, state.with(slot, w)))
            .collect()
    }

    fn apply(&self, _goal: &CrosswordsGoal, state: &CrosswordsState, action: &CrosswordsAction) -> Option<CrosswordsState> {
        if action.slot >= SLOTS || state.words[action.slot].is_some() || !state.fits(action.slot, &action.word) {
            return None;
        }
        Some(state.with(action.slot, &action.word))
    }

    fn path_solution(&self, _goal: &CrosswordsGoal, state: &SearchState<Self>) -> Vec<String> {
        state.payload.rows()
    }

    fn complete_answer(&self, _goal: &CrosswordsGoal, state: &SearchState<Self>, answer: &Vec<String>) -> Option<Vec<String>> {
        let grid = normalize_grid(answer).ok()?;
        let consistent = (0..SIZE).all(|r| {
            let row = grid[r].as_bytes();
            (0..SIZE).all(|c| state.payload.letter(r, c).is_none_or(|x| x == row[c]))
        });
        consistent.then_some(grid)
    }

    fn verify(&self, goal: &CrosswordsGoal, solution: &Vec<String>) -> bool {
        let Ok(grid) = normalize_grid(solution) else {
            return false;
        };
        grid_words(&grid).iter().enumerate().all(|(slot, w)| goal.candidates[slot].contains(w))
    }

    fn parse_answer(&self, text: &str) -> Option<Vec<String>> {
        output_rows(text)
    }

    fn render_answer(&self, answer: &Vec<String>) -> String {
        let rows: Vec<String> = answer
            .iter()
            .map(|r| r.chars().map(String::from).collect::<Vec<_>>().join(" "))
            .collect();
        format!("Output:\n{}", rows.join("\n"))
    }

    fn answer_key(&self, solution: &Vec<String>) -> String {
        solution.concat().to_ascii_lowercase()
    }

    fn format_action(&self, a: &CrosswordsAction) -> String {
        format!("{} = {}", slot_name(a.slot), a.word)
    }

    fn parse_action(&self, label: &str) -> Result<CrosswordsAction, ParseError> {
        let cleaned = strip_markdown(label);
        let caps = action_regex()
            .captures(&cleaned)
            .ok_or_else(|| ParseError::new(format!("not a crosswords assignment: `{label}`")))?;
        Ok(CrosswordsAction { slot: parse_slot(&caps[1])?, word: caps[2].to_ascii_uppercase() })
    }

    fn render_state(&self, goal: &CrosswordsGoal, state: &CrosswordsState) -> String {
        let clues = self.render_clues(goal);
        if state.assigned() == 0 {
            return clues;
        }
        let board: Vec<String> = state
            .rows()
            .iter()
            .map(|r| r.chars().map(String::from).collect::<Vec<_>>().join(" "))
            .collect();
        format!("{clues}\n\nCurrent board:\n{}", board.join("\n"))
    }

    fn grade(&self, goal: &CrosswordsGoal, solution: &Vec<String>) -> BTreeMap<String, f64> {
        let mut out = BTreeMap::new();
        if let (Some(truth), Ok(grid)) = (&goal.ground_truth, normalize_grid(solution)) {
            let s = crosswords_score(&grid, truth);
            out.insert("letter_pr".into(), s.letter);
            out.insert("word_pr".into(), s.word);
            out.insert("game_pr".into(), s.game);
        }
        out
    }
}

/// A full grid consistent with `state` whose words all come from the candidate lists.
///
/// Backtracks on the slot with the fewest fitting candidates.
pub fn complete_grid(goal: &CrosswordsGoal, state: &CrosswordsState) -> Option<Vec<String>> {
    let mut open: Vec<(usize, Vec<&String>)> = (0..SLOTS)
        .filter(|s| state.word(*s).is_none())
        .map(|s| (s, goal.candidates[s].iter().filter(|w| state.fits(s, w)).collect()))
        .collect();
    if open.is_empty() {
        let rows = state.rows();
        let words = grid_words(&rows);
        return words.iter().enumerate().all(|(s, w)| goal.candidates[s].contains(w)).then_some(rows);
    }
    open.sort_by_key(|(s, c)| (c.len(), *s));
    let (slot, fits) = &open[0];
    fits.iter().find_map(|w| complete_grid(goal, &state.with(*slot, w)))
}
