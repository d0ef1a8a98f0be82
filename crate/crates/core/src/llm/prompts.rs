//! Prompt templates and the per-domain prompt builders used by the model-backed advisor.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use regex::Regex;

use crate::advisor::{ProposeUse, ValueUse};
use crate::domain::Domain;
use crate::domains::blocksworld::Blocksworld;
use crate::domains::crosswords::Crosswords;
use crate::domains::game24::{fmt_rational_list, Game24};
use crate::error::{Error, ParseError};
use crate::search::SearchState;
use crate::text::strip_markdown;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TemplateId {
    PSolveGame24,
    PSolveCrosswords,
    PSolveBlocksworld,
    PCGame24,
    PCGeneric,
    PVGame24,
    PVGeneric,
    PD,
    SelfSearchHigh,
    SelfSearchLow,
    BeamPropose,
    BeamEval,
    PJudge,
}

impl TemplateId {
    pub const ALL: [TemplateId; 13] = [
        TemplateId::PSolveGame24,
        TemplateId::PSolveCrosswords,
        TemplateId::PSolveBlocksworld,
        TemplateId::PCGame24,
        TemplateId::PCGeneric,
        TemplateId::PVGame24,
        TemplateId::PVGeneric,
        TemplateId::PD,
        TemplateId::SelfSearchHigh,
        TemplateId::SelfSearchLow,
        TemplateId::BeamPropose,
        TemplateId::BeamEval,
        TemplateId::PJudge,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TemplateId::PSolveGame24 => "p_solve_game24",
            TemplateId::PSolveCrosswords => "p_solve_crosswords",
            TemplateId::PSolveBlocksworld => "p_solve_blocksworld",
            TemplateId::PCGame24 => "p_c_game24",
            TemplateId::PCGeneric => "p_c_generic",
            TemplateId::PVGame24 => "p_v_game24",
            TemplateId::PVGeneric => "p_v_generic",
            TemplateId::PD => "p_d",
            TemplateId::SelfSearchHigh => "self_search_high",
            TemplateId::SelfSearchLow => "self_search_low",
            TemplateId::BeamPropose => "beam_propose",
            TemplateId::BeamEval => "beam_eval",
            TemplateId::PJudge => "p_judge",
        }
    }

    pub fn body(self) -> &'static str {
        match self {
            TemplateId::PSolveGame24 => include_str!("templates/p_solve_game24.txt"),
            TemplateId::PSolveCrosswords => include_str!("templates/p_solve_crosswords.txt"),
            TemplateId::PSolveBlocksworld => include_str!("templates/p_solve_blocksworld.txt"),
            TemplateId::PCGame24 => include_str!("templates/p_c_game24.txt"),
            TemplateId::PCGeneric => include_str!("templates/p_c_generic.txt"),
            TemplateId::PVGame24 => include_str!("templates/p_v_game24.txt"),
            TemplateId::PVGeneric => include_str!("templates/p_v_generic.txt"),
            TemplateId::PD => include_str!("templates/p_d.txt"),
            TemplateId::SelfSearchHigh => include_str!("templates/self_search_high.txt"),
            TemplateId::SelfSearchLow => include_str!("templates/self_search_low.txt"),
            TemplateId::BeamPropose => include_str!("templates/beam_propose.txt"),
            TemplateId::BeamEval => include_str!("templates/beam_eval.txt"),
            TemplateId::PJudge => include_str!("templates/p_judge.txt"),
        }
    }

    /// Placeholder names in order of first appearance.
    pub fn placeholders(self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for c in placeholder_regex().captures_iter(self.body()) {
            if !out.iter().any(|n| n == &c[1]) {
                out.push(c[1].to_string());
            }
        }
        out
    }
}

impl fmt::Display for TemplateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TemplateId {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|t| t.as_str() == s.trim())
            .ok_or_else(|| ParseError::new(format!("unknown template `{s}`")))
    }
}

fn placeholder_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\{([a-z_]+)\}").expect("valid placeholder regex"))
}

/// Fills every `{name}` in the template. Values are inserted verbatim.
pub fn render_prompt(id: TemplateId, vars: &[(&str, &str)]) -> Result<String, Error> {
    let body = id.body();
    let mut out = String::with_capacity(body.len() + 64);
    let mut last = 0;
    for c in placeholder_regex().captures_iter(body) {
        let m = c.get(0).expect("whole match");
        let name = &c[1];
        let value = vars.iter().find(|(k, _)| *k == name).ok_or_else(|| Error::MissingVariable(name.to_string()))?;
        out.push_str(&body[last..m.start()]);
        out.push_str(value.1);
        last = m.end();
    }
    out.push_str(&body[last..]);
    Ok(out)
}

fn render(id: TemplateId, vars: &[(&str, &str)]) -> String {
    render_prompt(id, vars).expect("builders supply every placeholder")
}

/// Lines of a list reply with numbering and markdown removed.
pub fn proposal_lines(text: &str) -> Vec<String> {
    static PREFIX: OnceLock<Regex> = OnceLock::new();
    let prefix = PREFIX
        .get_or_init(|| Regex::new(r"(?i)^(?:step\s*\d+\s*[:.)]\s*|\d+\s*[.):]\s+)").expect("valid prefix regex"));
    text.lines()
        .map(|l| prefix.replace(&strip_markdown(l), "").trim().to_string())
        .filter(|l| !l.is_empty())
        .collect()
}

/// How a domain talks to a model.
pub trait PromptDomain: Domain {
    /// One-paragraph task statement used by the generic templates.
    fn task(&self, goal: &Self::Goal) -> String;

    fn example_action(&self) -> &'static str;

    fn action_format(&self) -> &'static str;

    fn solve_prompt(&self, goal: &Self::Goal, state: &SearchState<Self>) -> String;

    fn validity_prompt(&self, goal: &Self::Goal, states: &[SearchState<Self>]) -> String {
        let input = state_list(states, |s| self.render_state(goal, &s.payload));
        render(TemplateId::PCGeneric, &[("task", &self.task(goal)), ("input", &input)])
    }

    fn value_prompt(&self, goal: &Self::Goal, state: &SearchState<Self>, usage: ValueUse) -> String {
        let id = match usage {
            ValueUse::Rank => TemplateId::PVGeneric,
            ValueUse::BeamEval => TemplateId::BeamEval,
        };
        render(id, &[("task", &self.task(goal)), ("state", &self.render_state(goal, &state.payload))])
    }

    fn propose_prompt(&self, goal: &Self::Goal, state: &SearchState<Self>, usage: ProposeUse, width: usize) -> String {
        let task = self.task(goal);
        let rendered = self.render_state(goal, &state.payload);
        let width = width.to_string();
        let mut vars = vec![
            ("task", task.as_str()),
            ("action_format", self.action_format()),
            ("example", self.example_action()),
            ("state", rendered.as_str()),
        ];
        let id = match usage {
            ProposeUse::Decompose => TemplateId::PD,
            ProposeUse::Beam => {
                vars.push(("width", width.as_str()));
                TemplateId::BeamPropose
            }
        };
        render(id, &vars)
    }

    fn judge_prompt(&self, goal: &Self::Goal, solution: &Self::Solution) -> String {
        let text = serde_json::to_string(solution).expect("solutions serialize");
        render(TemplateId::PJudge, &[("task", &self.task(goal)), ("solution", &text)])
    }

    /// Actions named in a proposal reply, in reply order. Unreadable lines are skipped.
    fn parse_proposal(&self, text: &str) -> Vec<Self::Action> {
        proposal_lines(text).iter().filter_map(|l| self.parse_action(l).ok()).collect()
    }
}

fn state_list<T>(items: &[T], show: impl Fn(&T) -> String) -> String {
    items
        .iter()
        .enumerate()
        .map(|(i, s)| format!("State {i}: {}", show(s).replace('\n', " | ")))
        .collect::<Vec<_>>()
        .join("\n")
}

impl PromptDomain for Game24 {
    fn task(&self, _goal: &Self::Goal) -> String {
        "Use the given numbers and basic arithmetic operations (+, -, *, /) to reach 24, using each number exactly once.".into()
    }

    fn example_action(&self) -> &'static str {
        "4 / 2 = 2; (left: 1 2 7)"
    }

    fn action_format(&self) -> &'static str {
        "a op b = c; (left: remaining numbers)"
    }

    fn solve_prompt(&self, _goal: &Self::Goal, state: &SearchState<Self>) -> String {
        render(TemplateId::PSolveGame24, &[("input", &fmt_rational_list(state.payload.numbers()))])
    }

    fn validity_prompt(&self, _goal: &Self::Goal, states: &[SearchState<Self>]) -> String {
        let input = state_list(states, |s| fmt_rational_list(s.payload.numbers()));
        render(TemplateId::PCGame24, &[("input", &input)])
    }

    fn value_prompt(&self, goal: &Self::Goal, state: &SearchState<Self>, usage: ValueUse) -> String {
        let numbers = fmt_rational_list(state.payload.numbers());
        match usage {
            ValueUse::Rank => render(TemplateId::PVGame24, &[("input", &numbers)]),
            ValueUse::BeamEval => render(TemplateId::BeamEval, &[("task", &self.task(goal)), ("state", &numbers)]),
        }
    }

    fn judge_prompt(&self, goal: &Self::Goal, solution: &String) -> String {
        let task = format!("{} Input: {}", self.task(goal), goal.inputs.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(" "));
        render(TemplateId::PJudge, &[("task", &task), ("solution", solution)])
    }
}

impl PromptDomain for Crosswords {
    fn task(&self, _goal: &Self::Goal) -> String {
        "Solve a 5x5 mini crossword: choose one 5-letter word per clue from its candidate list so that all crossing letters agree.".into()
    }

    fn example_action(&self) -> &'static str {
        "h2 = OLEIN"
    }

    fn action_format(&self) -> &'static str {
        "slot = WORD (slots h1-h5 for rows, v1-v5 for columns)"
    }

    fn solve_prompt(&self, goal: &Self::Goal, state: &SearchState<Self>) -> String {
        render(TemplateId::PSolveCrosswords, &[("input", &self.render_state(goal, &state.payload))])
    }

    fn judge_prompt(&self, goal: &Self::Goal, solution: &Vec<String>) -> String {
        let task = format!("{}\n{}", self.task(goal), self.render_clues(goal));
        render(TemplateId::PJudge, &[("task", &task), ("solution", &solution.join("\n"))])
    }
}

impl PromptDomain for Blocksworld {
    fn task(&self, goal: &Self::Goal) -> String {
        format!(
            "Plan a sequence of Blocksworld actions (pickup X, put X, stack X Y, unstack X Y) that reaches the goal in at most {} actions.",
            goal.step_bound()
        )
    }

    fn example_action(&self) -> &'static str {
        "unstack A B"
    }

    fn action_format(&self) -> &'static str {
        "verb block [block]"
    }

    fn solve_prompt(&self, goal: &Self::Goal, state: &SearchState<Self>) -> String {
        let preds = self.canonical_key(&state.payload).replace(' ', ", ");
        let target: Vec<String> = goal.goal.iter().map(|p| p.to_string()).collect();
        let left = goal.step_bound().saturating_sub(state.depth()).to_string();
        render(TemplateId::PSolveBlocksworld, &[("state", &preds), ("goal", &target.join(", ")), ("max_steps", &left)])
    }

    fn judge_prompt(&self, goal: &Self::Goal, solution: &Vec<String>) -> String {
        let init: Vec<String> = goal.init.preds().iter().map(|p| p.to_string()).collect();
        let task = format!("{}\nInitial state: {}", self.task(goal), init.join(", "));
        render(TemplateId::PJudge, &[("task", &task), ("solution", &solution.join("\n"))])
    }
}
