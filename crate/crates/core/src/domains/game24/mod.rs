//! Game of 24: combine four numbers with + - * / into exactly 24.

pub mod expr;
pub mod solver;

use num_rational::Rational64;
use regex::Regex;
use std::sync::OnceLock;

use crate::domain::{Domain, DomainKind, PlanningProblem, ProblemMeta};
use crate::error::ParseError;
use crate::search::SearchState;
use crate::text::{after_last_keyword, strip_markdown};

pub use expr::{fmt_rational, parse_expr, parse_rational, Expr, Op};

pub const TARGET: i64 = 24;

fn target() -> Rational64 {
    Rational64::from_integer(TARGET)
}

/// Decimal operands written by a model are matched to state values within this distance.
const DECIMAL_TOLERANCE: f64 = 0.01;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Game24State {
    numbers: Vec<Rational64>,
}

impl Game24State {
    pub fn new(mut numbers: Vec<Rational64>) -> Self {
        numbers.sort();
        Self { numbers }
    }

    pub fn from_ints(nums: &[i64]) -> Self {
        Self::new(nums.iter().map(|n| Rational64::from_integer(*n)).collect())
    }

    pub fn numbers(&self) -> &[Rational64] {
        &self.numbers
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Game24Action {
    pub lhs: Rational64,
    pub op: Op,
    pub rhs: Rational64,
    pub result: Rational64,
    /// Numbers remaining after the step; empty when a label omitted them.
    pub left: Vec<Rational64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Game24Goal {
    pub inputs: Vec<i64>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Game24;

impl Game24 {
    pub fn problem(&self, id: impl Into<String>, inputs: &[i64]) -> PlanningProblem<Self> {
        PlanningProblem::new(self, id, Game24State::from_ints(inputs), Game24Goal { inputs: inputs.to_vec() })
    }

    pub fn problem_with_meta(&self, id: impl Into<String>, inputs: &[i64], meta: ProblemMeta) -> PlanningProblem<Self> {
        self.problem(id, inputs).with_meta(meta)
    }

    /// Replays `path` over the inputs, pairing each live number with the expression that built it.
    pub fn expression_pool(&self, goal: &Game24Goal, path: &[Game24Action]) -> Option<Vec<(Rational64, Expr)>> {
        let mut pool: Vec<(Rational64, Expr)> = goal
            .inputs
            .iter()
            .map(|n| (Rational64::from_integer(*n), Expr::num(*n)))
            .collect();
        for a in path {
            let i = take_index(&pool, a.lhs, None)?;
            let j = take_index(&pool, a.rhs, Some(i))?;
            let value = a.op.apply(pool[i].0, pool[j].0)?;
            let e = Expr::bin(a.op, pool[i].1.clone(), pool[j].1.clone());
            let (hi, lo) = if i > j { (i, j) } else { (j, i) };
            pool.remove(hi);
            pool.remove(lo);
            pool.push((value, e));
        }
        Some(pool)
    }
}

fn near(a: Rational64, b: Rational64) -> bool {
    let diff = a - b;
    (*diff.numer() as f64 / *diff.denom() as f64).abs() < DECIMAL_TOLERANCE
}

/// Index of an entry equal to `v`, falling back to a near match for non-integers.
fn take_index<T>(pool: &[(Rational64, T)], v: Rational64, skip: Option<usize>) -> Option<usize> {
    let live = |i: &usize| Some(*i) != skip;
    (0..pool.len())
        .filter(live)
        .find(|&i| pool[i].0 == v)
        .or_else(|| (0..pool.len()).filter(live).find(|&i| !pool[i].0.is_integer() && near(pool[i].0, v)))
}

/// Space-separated numbers, as used in keys and prompts.
pub fn fmt_rational_list(nums: &[Rational64]) -> String {
    nums.iter().map(fmt_rational).collect::<Vec<_>>().join(" ")
}

/// True iff `text` is an expression using exactly `inputs` that evaluates to 24.
pub fn game24_verify(inputs: &[i64], text: &str) -> bool {
    let Ok(e) = parse_expr(text) else {
        return false;
    };
    let mut leaves = e.leaves();
    if leaves.iter().any(|l| !l.is_integer()) {
        return false;
    }
    leaves.sort();
    let mut want: Vec<_> = inputs.iter().map(|n| Rational64::from_integer(*n)).collect();
    want.sort();
    leaves == want && e.eval() == Some(target())
}

/// Substitutes pool expressions for the leaves of `answer`.
///
/// With `fraction_leaves`, a literal `p / q` may stand for a non-integer pool value.
fn bind(answer: &Expr, pool: &mut Vec<(Rational64, Expr)>, fraction_leaves: bool) -> Option<Expr> {
    if fraction_leaves {
        if let Expr::Bin { op: Op::Div, lhs, rhs } = answer {
            if let (Expr::Num(_), Expr::Num(_), Some(v)) = (lhs.as_ref(), rhs.as_ref(), answer.eval()) {
                if !v.is_integer() {
                    if let Some(i) = pool.iter().position(|(pv, _)| *pv == v) {
                        return Some(pool.remove(i).1);
                    }
                }
            }
        }
    }
    match answer {
        Expr::Num(v) => {
            let i = take_index(pool, *v, None)?;
            Some(pool.remove(i).1)
        }
        Expr::Bin { op, lhs, rhs } => {
            let l = bind(lhs, pool, fraction_leaves)?;
            let r = bind(rhs, pool, fraction_leaves)?;
            Some(Expr::bin(*op, l, r))
        }
    }
}

fn action_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"^\s*(-?[0-9./]+)\s*([-+*/×÷−])\s*(-?[0-9./]+)\s*=\s*(-?[0-9./]+)\s*;?\s*(?:\(\s*left\s*:\s*([^)]*)\))?\s*$")
            .expect("valid action regex")
    })
}

impl Domain for Game24 {
    type State = Game24State;
    type Action = Game24Action;
    type Goal = Game24Goal;
    type Answer = Expr;
    type Solution = String;

    const KIND: DomainKind = DomainKind::Game24;

    fn canonical_key(&self, state: &Game24State) -> String {
        fmt_rational_list(&state.numbers)
    }

    fn is_goal(&self, _goal: &Game24Goal, state: &Game24State) -> bool {
        state.numbers.len() == 1 && state.numbers[0] == target()
    }

    fn is_complete(&self, _goal: &Game24Goal, state: &Game24State) -> bool {
        state.numbers.len() <= 1
    }

    fn decompose(&self, _goal: &Game24Goal, state: &Game24State) -> Vec<(Game24Action, Game24State)> {
        let nums = &state.numbers;
        let mut out: Vec<(Game24Action, Game24State)> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for i in 0..nums.len() {
            for j in i + 1..nums.len() {
                let (a, b) = (nums[i], nums[j]);
                let rest = || nums.iter().enumerate().filter(|(k, _)| *k != i && *k != j).map(|(_, v)| *v);
                let cases = [(a, Op::Add, b), (a, Op::Mul, b), (a, Op::Sub, b), (b, Op::Sub, a), (a, Op::Div, b), (b, Op::Div, a)];
                for (lhs, op, rhs) in cases {
                    let Some(result) = op.apply(lhs, rhs) else { continue };
                    let child = Game24State::new(rest().chain(std::iter::once(result)).collect());
                    if seen.insert(self.canonical_key(&child)) {
                        let action = Game24Action { lhs, op, rhs, result, left: child.numbers.clone() };
                        out.push((action, child));
                    }
                }
            }
        }
        out
    }

    fn apply(&self, _goal: &Game24Goal, state: &Game24State, action: &Game24Action) -> Option<Game24State> {
        let pool: Vec<(Rational64, ())> = state.numbers.iter().map(|n| (*n, ())).collect();
        let i = take_index(&pool, action.lhs, None)?;
        let j = take_index(&pool, action.rhs, Some(i))?;
        let result = action.op.apply(state.numbers[i], state.numbers[j])?;
        if result != action.result && !near(result, action.result) {
            return None;
        }
        let rest = state.numbers.iter().enumerate().filter(|(k, _)| *k != i && *k != j).map(|(_, v)| *v);
        Some(Game24State::new(rest.chain(std::iter::once(result)).collect()))
    }

    fn path_solution(&self, goal: &Game24Goal, state: &SearchState<Self>) -> String {
        match self.expression_pool(goal, &state.path) {
            Some(pool) if pool.len() == 1 => format!("{} = {}", pool[0].1, fmt_rational(&pool[0].0)),
            Some(pool) => pool.iter().map(|(_, e)| e.to_string()).collect::<Vec<_>>().join(", "),
            None => String::new(),
        }
    }

    fn complete_answer(&self, goal: &Game24Goal, state: &SearchState<Self>, answer: &Expr) -> Option<String> {
        let pool = self.expression_pool(goal, &state.path)?;
        for fraction_leaves in [false, true] {
            let mut p = pool.clone();
            if let Some(e) = bind(answer, &mut p, fraction_leaves) {
                if p.is_empty() {
                    return Some(format!("{e} = {TARGET}"));
                }
            }
        }
        None
    }

    fn verify(&self, goal: &Game24Goal, solution: &String) -> bool {
        game24_verify(&goal.inputs, solution)
    }

    fn parse_answer(&self, text: &str) -> Option<Expr> {
        let line = after_last_keyword(text, "answer")?;
        parse_expr(&strip_markdown(&line)).ok()
    }

    fn render_answer(&self, answer: &Expr) -> String {
        format!("Answer: {answer} = {TARGET}")
    }

    fn answer_key(&self, solution: &String) -> String {
        solution.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase()
    }

    fn format_action(&self, a: &Game24Action) -> String {
        let step = format!("{} {} {} = {}", fmt_rational(&a.lhs), a.op, fmt_rational(&a.rhs), fmt_rational(&a.result));
        if a.left.is_empty() {
            step
        } else {
            format!("{step}; (left: {})", fmt_rational_list(&a.left))
        }
    }

    fn parse_action(&self, label: &str) -> Result<Game24Action, ParseError> {
        let cleaned = strip_markdown(label);
        let caps = action_regex()
            .captures(&cleaned)
            .ok_or_else(|| ParseError::new(format!("not a game24 step: `{label}`")))?;
        let op_char = caps[2].chars().next().unwrap_or('?');
        let op = Op::from_symbol(op_char).ok_or_else(|| ParseError::new(format!("unknown operator `{op_char}`")))?;
        let left = match caps.get(5) {
            Some(m) => {
                let mut v = m.as_str().split_whitespace().map(parse_rational).collect::<Result<Vec<_>, _>>()?;
                v.sort();
                v
            }
            None => Vec::new(),
        };
        Ok(Game24Action {
            lhs: parse_rational(&caps[1])?,
            op,
            rhs: parse_rational(&caps[3])?,
            result: parse_rational(&caps[4])?,
            left,
        })
    }

    fn render_state(&self, _goal: &Game24Goal, state: &Game24State) -> String {
        fmt_rational_list(&state.numbers)
    }
}
