//! Blocksworld with the four verbs pickup, put, stack, and unstack.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::domain::{Domain, DomainKind, PlanningProblem, ProblemMeta};
use crate::error::ParseError;
use crate::search::SearchState;
use crate::text::strip_markdown;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Support {
    Table,
    On(usize),
    Held,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pred {
    On(String, String),
    OnTable(String),
    Clear(String),
    Holding(String),
    ArmEmpty,
}

impl fmt::Display for Pred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pred::On(x, y) => write!(f, "on({x},{y})"),
            Pred::OnTable(x) => write!(f, "on_table({x})"),
            Pred::Clear(x) => write!(f, "clear({x})"),
            Pred::Holding(x) => write!(f, "holding({x})"),
            Pred::ArmEmpty => write!(f, "arm_empty"),
        }
    }
}

/// Reads `on(a,b)`, `(on a b)`, `ontable a`, `handempty`, and similar spellings.
pub fn parse_pred(text: &str) -> Result<Pred, ParseError> {
    let cleaned: String = text
        .chars()
        .map(|c| if matches!(c, '(' | ')' | ',') { ' ' } else { c })
        .collect();
    let words: Vec<&str> = cleaned.split_whitespace().collect();
    let bad = || ParseError::new(format!("not a blocksworld predicate: `{text}`"));
    let (head, args) = words.split_first().ok_or_else(bad)?;
    let name = |i: usize| args.get(i).map(|s| s.to_ascii_uppercase()).ok_or_else(bad);
    let pred = match head.to_ascii_lowercase().replace(['_', '-'], "").as_str() {
        "on" if args.len() == 2 => Pred::On(name(0)?, name(1)?),
        "ontable" if args.len() == 1 => Pred::OnTable(name(0)?),
        "clear" if args.len() == 1 => Pred::Clear(name(0)?),
        "holding" if args.len() == 1 => Pred::Holding(name(0)?),
        "armempty" | "handempty" if args.is_empty() => Pred::ArmEmpty,
        _ => return Err(bad()),
    };
    Ok(pred)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BlocksState {
    names: Arc<Vec<String>>,
    support: Vec<Support>,
}

impl BlocksState {
    /// Builds a state from predicates; derived predicates that are given must agree.
    pub fn from_preds(names: &[String], preds: &[Pred]) -> Result<Self, ParseError> {
        let idx = |n: &str| {
            names
                .iter()
                .position(|b| b == n)
                .ok_or_else(|| ParseError::new(format!("unknown block `{n}`")))
        };
        let mut support: Vec<Option<Support>> = vec![None; names.len()];
        let mut set = |i: usize, s: Support| -> Result<(), ParseError> {
            if support[i].replace(s).is_some_and(|old| old != s) {
                return Err(ParseError::new(format!("block `{}` has two supports", names[i])));
            }
            Ok(())
        };
        for p in preds {
            match p {
                Pred::On(x, y) => set(idx(x)?, Support::On(idx(y)?))?,
                Pred::OnTable(x) => set(idx(x)?, Support::Table)?,
                Pred::Holding(x) => set(idx(x)?, Support::Held)?,
                Pred::Clear(_) | Pred::ArmEmpty => {}
            }
        }
        let support: Vec<Support> = support
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.ok_or_else(|| ParseError::new(format!("block `{}` has no support", names[i]))))
            .collect::<Result<_, _>>()?;
        let state = Self { names: Arc::new(names.to_vec()), support };
        state.check()?;
        for p in preds {
            if !state.holds(p) {
                return Err(ParseError::new(format!("predicate {p} contradicts the rest of the state")));
            }
        }
        Ok(state)
    }

    fn check(&self) -> Result<(), ParseError> {
        let held = self.support.iter().filter(|s| **s == Support::Held).count();
        if held > 1 {
            return Err(ParseError::new("more than one block is held"));
        }
        let mut below = vec![0usize; self.support.len()];
        for (i, s) in self.support.iter().enumerate() {
            if let Support::On(j) = s {
                if *j == i || self.support[*j] == Support::Held {
                    return Err(ParseError::new(format!("block `{}` rests on an impossible support", self.names[i])));
                }
                below[*j] += 1;
            }
        }
        if below.iter().any(|n| *n > 1) {
            return Err(ParseError::new("two blocks rest on the same block"));
        }
        for start in 0..self.support.len() {
            let mut cur = start;
            for _ in 0..=self.support.len() {
                match self.support[cur] {
                    Support::On(j) => cur = j,
                    _ => break,
                }
            }
            if let Support::On(_) = self.support[cur] {
                return Err(ParseError::new("blocks are stacked in a cycle"));
            }
        }
        Ok(())
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|b| b.eq_ignore_ascii_case(name))
    }

    fn is_clear(&self, i: usize) -> bool {
        self.support[i] != Support::Held && !self.support.contains(&Support::On(i))
    }

    fn held(&self) -> Option<usize> {
        self.support.iter().position(|s| *s == Support::Held)
    }

    /// Name of the held block, if any.
    pub fn holding(&self) -> Option<&str> {
        self.held().map(|i| self.names[i].as_str())
    }

    pub fn holds(&self, p: &Pred) -> bool {
        let Some(i) = (match p {
            Pred::ArmEmpty => return self.held().is_none(),
            Pred::On(x, _) | Pred::OnTable(x) | Pred::Clear(x) | Pred::Holding(x) => self.index(x),
        }) else {
            return false;
        };
        match p {
            Pred::On(_, y) => self.index(y).is_some_and(|j| self.support[i] == Support::On(j)),
            Pred::OnTable(_) => self.support[i] == Support::Table,
            Pred::Clear(_) => self.is_clear(i),
            Pred::Holding(_) => self.support[i] == Support::Held,
            Pred::ArmEmpty => unreachable!(),
        }
    }

    /// All true predicates, sorted by their text.
    pub fn preds(&self) -> Vec<Pred> {
        let mut out = Vec::new();
        for (i, s) in self.support.iter().enumerate() {
            let x = self.names[i].clone();
            out.push(match s {
                Support::Table => Pred::OnTable(x.clone()),
                Support::On(j) => Pred::On(x.clone(), self.names[*j].clone()),
                Support::Held => Pred::Holding(x.clone()),
            });
            if self.is_clear(i) {
                out.push(Pred::Clear(x));
            }
        }
        if self.held().is_none() {
            out.push(Pred::ArmEmpty);
        }
        out.sort_by_cached_key(|p| p.to_string());
        out
    }
}

impl fmt::Debug for BlocksState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BlocksState({})", Blocksworld.canonical_key(self))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verb {
    Pickup,
    Put,
    Stack,
    Unstack,
}

impl Verb {
    pub fn as_str(self) -> &'static str {
        match self {
            Verb::Pickup => "pickup",
            Verb::Put => "put",
            Verb::Stack => "stack",
            Verb::Unstack => "unstack",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlocksAction {
    pub verb: Verb,
    pub x: String,
    pub y: Option<String>,
}

impl BlocksAction {
    fn new(verb: Verb, x: &str, y: Option<&str>) -> Self {
        Self { verb, x: x.to_string(), y: y.map(str::to_string) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlocksGoal {
    pub init: BlocksState,
    pub goal: Vec<Pred>,
    /// Length of a shortest plan.
    pub min_steps: usize,
}

impl BlocksGoal {
    /// Checks the problem and computes `min_steps` by breadth-first search.
    pub fn new(blocks: &[String], init: &[Pred], goal: Vec<Pred>) -> Result<Self, ParseError> {
        let names: Vec<String> = blocks.iter().map(|b| b.trim().to_ascii_uppercase()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != names.len() || names.iter().any(|n| n.is_empty() || n.contains(char::is_whitespace)) {
            return Err(ParseError::new("block names must be distinct single words"));
        }
        let init = BlocksState::from_preds(&names, init)?;
        for p in &goal {
            match p {
                Pred::On(x, y) if init.index(x).is_none() || init.index(y).is_none() => {
                    return Err(ParseError::new(format!("goal {p} names an unknown block")))
                }
                Pred::OnTable(x) | Pred::Clear(x) | Pred::Holding(x) if init.index(x).is_none() => {
                    return Err(ParseError::new(format!("goal {p} names an unknown block")))
                }
                _ => {}
            }
        }
        let mut g = Self { init, goal, min_steps: 0 };
        g.min_steps = shortest_plan_len(&g).ok_or_else(|| ParseError::new("goal is unreachable"))?;
        Ok(g)
    }

    pub fn satisfied(&self, state: &BlocksState) -> bool {
        self.goal.iter().all(|p| state.holds(p))
    }

    /// Largest accepted plan length: floor(1.2 * min_steps).
    pub fn step_bound(&self) -> usize {
        self.min_steps * 6 / 5
    }
}

fn successors(state: &BlocksState) -> Vec<(BlocksAction, BlocksState)> {
    let n = state.support.len();
    let name = |i: usize| state.names[i].as_str();
    let mut out = Vec::new();
    let moved = |i: usize, s: Support| {
        let mut next = state.clone();
        next.support[i] = s;
        next
    };
    match state.held() {
        None => {
            for x in (0..n).filter(|x| state.is_clear(*x)) {
                match state.support[x] {
                    Support::Table => out.push((BlocksAction::new(Verb::Pickup, name(x), None), moved(x, Support::Held))),
                    Support::On(y) => out.push((
                        BlocksAction::new(Verb::Unstack, name(x), Some(name(y))),
                        moved(x, Support::Held),
                    )),
                    Support::Held => {}
                }
            }
        }
        Some(x) => {
            out.push((BlocksAction::new(Verb::Put, name(x), None), moved(x, Support::Table)));
            for y in (0..n).filter(|y| *y != x && state.is_clear(*y)) {
                out.push((BlocksAction::new(Verb::Stack, name(x), Some(name(y))), moved(x, Support::On(y))));
            }
        }
    }
    out
}

fn step(state: &BlocksState, a: &BlocksAction) -> Option<BlocksState> {
    let x = state.index(&a.x)?;
    let y = match &a.y {
        Some(y) => Some(state.index(y)?),
        None => None,
    };
    let mut next = state.clone();
    match (a.verb, y) {
        (Verb::Pickup, None) => {
            if state.held().is_some() || !state.is_clear(x) || state.support[x] != Support::Table {
                return None;
            }
            next.support[x] = Support::Held;
        }
        (Verb::Unstack, Some(y)) => {
            if state.held().is_some() || !state.is_clear(x) || state.support[x] != Support::On(y) {
                return None;
            }
            next.support[x] = Support::Held;
        }
        (Verb::Put, None) => {
            if state.support[x] != Support::Held {
                return None;
            }
            next.support[x] = Support::Table;
        }
        (Verb::Stack, Some(y)) => {
            if state.support[x] != Support::Held || x == y || !state.is_clear(y) {
                return None;
            }
            next.support[x] = Support::On(y);
        }
        _ => return None,
    }
    Some(next)
}

/// Distance of every state to the nearest goal state, over the state graph reachable from `init`.
///
/// Every action has an inverse, so distances are computed with an undirected BFS.
pub fn goal_distances(goal: &BlocksGoal) -> HashMap<BlocksState, usize> {
    let mut all = vec![goal.init.clone()];
    let mut seen: HashMap<BlocksState, usize> = HashMap::new();
    seen.insert(goal.init.clone(), 0);
    let mut i = 0;
    while i < all.len() {
        for (_, next) in successors(&all[i]) {
            if !seen.contains_key(&next) {
                seen.insert(next.clone(), 0);
                all.push(next);
            }
        }
        i += 1;
    }
    let mut dist: HashMap<BlocksState, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    for s in all.iter().filter(|s| goal.satisfied(s)) {
        dist.insert(s.clone(), 0);
        queue.push_back(s.clone());
    }
    while let Some(s) = queue.pop_front() {
        let d = dist[&s];
        for (_, next) in successors(&s) {
            if !dist.contains_key(&next) {
                dist.insert(next.clone(), d + 1);
                queue.push_back(next);
            }
        }
    }
    dist
}

fn shortest_plan_len(goal: &BlocksGoal) -> Option<usize> {
    let mut seen = HashMap::new();
    let mut queue = VecDeque::from([(goal.init.clone(), 0usize)]);
    seen.insert(goal.init.clone(), ());
    while let Some((s, d)) = queue.pop_front() {
        if goal.satisfied(&s) {
            return Some(d);
        }
        for (_, next) in successors(&s) {
            if seen.insert(next.clone(), ()).is_none() {
                queue.push_back((next, d + 1));
            }
        }
    }
    None
}

fn action_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(
            r"(?ix)^\s*(?:step\s*\d+\s*[:.)]\s*|\d+\s*[:.)]\s*)?\(?\s*
              (pick[\s_-]?up|put[\s_-]?down|put|unstack|stack)\s+
              (?:the\s+)?([a-z0-9]+)(?:\s+block)?
              (?:\s+(?:from\s+)?(?:on\s+)?(?:top\s+of\s+)?(?:the\s+)?(?:on\s+)?([a-z0-9]+)(?:\s+block)?)?
              \s*\)?\s*[.;]?\s*$",
        )
        .expect("valid action regex")
    })
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Blocksworld;

impl Blocksworld {
    pub fn problem(&self, id: impl Into<String>, goal: BlocksGoal) -> PlanningProblem<Self> {
        let meta = ProblemMeta { min_steps: Some(goal.min_steps), ..ProblemMeta::default() };
        PlanningProblem::new(self, id, goal.init.clone(), goal).with_meta(meta)
    }

    pub fn problem_with_meta(&self, id: impl Into<String>, goal: BlocksGoal, meta: ProblemMeta) -> PlanningProblem<Self> {
        let min_steps = goal.min_steps;
        let mut p = self.problem(id, goal).with_meta(meta);
        p.meta.min_steps = Some(min_steps);
        p
    }

    /// The plan in PDDL action syntax, for external validators.
    pub fn to_pddl_plan(&self, plan: &[String]) -> Result<String, ParseError> {
        plan.iter()
            .map(|label| {
                let a = self.parse_action(label)?;
                let verb = match a.verb {
                    Verb::Pickup => "pick-up",
                    Verb::Put => "put-down",
                    Verb::Stack => "stack",
                    Verb::Unstack => "unstack",
                };
                Ok(match a.y {
                    Some(y) => format!("({verb} {} {})", a.x.to_lowercase(), y.to_lowercase()),
                    None => format!("({verb} {})", a.x.to_lowercase()),
                })
            })
            .collect::<Result<Vec<_>, _>>()
            .map(|lines| lines.join("\n"))
    }
}

impl Domain for Blocksworld {
    type State = BlocksState;
    type Action = BlocksAction;
    type Goal = BlocksGoal;
    type Answer = Vec<BlocksAction>;
    type Solution = Vec<String>;

    const KIND: DomainKind = DomainKind::Blocksworld;

    fn canonical_key(&self, state: &BlocksState) -> String {
        state.preds().iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
    }

    fn is_goal(&self, goal: &BlocksGoal, state: &BlocksState) -> bool {
        goal.satisfied(state)
    }

    fn is_complete(&self, goal: &BlocksGoal, state: &BlocksState) -> bool {
        goal.satisfied(state)
    }

    fn decompose(&self, _goal: &BlocksGoal, state: &BlocksState) -> Vec<(BlocksAction, BlocksState)> {
        successors(state)
    }

    fn apply(&self, _goal: &BlocksGoal, state: &BlocksState, action: &BlocksAction) -> Option<BlocksState> {
        step(state, action)
    }

    fn depth_limit(&self, goal: &BlocksGoal) -> Option<usize> {
        Some(goal.step_bound())
    }

    fn path_solution(&self, _goal: &BlocksGoal, state: &SearchState<Self>) -> Vec<String> {
        state.path.iter().map(|a| self.format_action(a)).collect()
    }

    fn complete_answer(
        &self,
        _goal: &BlocksGoal,
        state: &SearchState<Self>,
        answer: &Vec<BlocksAction>,
    ) -> Option<Vec<String>> {
        Some(state.path.iter().chain(answer).map(|a| self.format_action(a)).collect())
    }

    fn verify(&self, goal: &BlocksGoal, plan: &Vec<String>) -> bool {
        if plan.len() > goal.step_bound() {
            return false;
        }
        let mut s = goal.init.clone();
        for label in plan {
            let Ok(a) = self.parse_action(label) else {
                return false;
            };
            match step(&s, &a) {
                Some(next) => s = next,
                None => return false,
            }
        }
        goal.satisfied(&s)
    }

    fn parse_answer(&self, text: &str) -> Option<Vec<BlocksAction>> {
        let lower = text.to_ascii_lowercase();
        let body = match lower.rfind("plan:") {
            Some(i) => &text[i + "plan:".len()..],
            None => text,
        };
        let mut plan = Vec::new();
        for line in body.lines() {
            let line = strip_markdown(line);
            if line.to_ascii_lowercase().contains("plan end") {
                break;
            }
            if let Ok(a) = self.parse_action(&line) {
                plan.push(a);
            }
        }
        (!plan.is_empty()).then_some(plan)
    }

    fn render_answer(&self, answer: &Vec<BlocksAction>) -> String {
        let lines: Vec<String> = answer.iter().map(|a| self.format_action(a)).collect();
        format!("Plan:\n{}", lines.join("\n"))
    }

    fn answer_key(&self, solution: &Vec<String>) -> String {
        solution.join(";").to_ascii_lowercase()
    }

    fn format_action(&self, a: &BlocksAction) -> String {
        match &a.y {
            Some(y) => format!("{} {} {}", a.verb.as_str(), a.x, y),
            None => format!("{} {}", a.verb.as_str(), a.x),
        }
    }

    fn parse_action(&self, label: &str) -> Result<BlocksAction, ParseError> {
        let caps = action_regex()
            .captures(label)
            .ok_or_else(|| ParseError::new(format!("not a blocksworld action: `{label}`")))?;
        let verb_text = caps[1].to_ascii_lowercase();
        let verb = if verb_text.starts_with("pick") {
            Verb::Pickup
        } else if verb_text.starts_with("put") {
            Verb::Put
        } else if verb_text == "unstack" {
            Verb::Unstack
        } else {
            Verb::Stack
        };
        let x = caps[2].to_ascii_uppercase();
        let y = caps.get(3).map(|m| m.as_str().to_ascii_uppercase());
        match (verb, &y) {
            (Verb::Pickup | Verb::Put, None) | (Verb::Stack | Verb::Unstack, Some(_)) => {
                Ok(BlocksAction { verb, x, y })
            }
            _ => Err(ParseError::new(format!("wrong operand count in `{label}`"))),
        }
    }

    fn render_state(&self, goal: &BlocksGoal, state: &BlocksState) -> String {
        let goal_text: Vec<String> = goal.goal.iter().map(|p| p.to_string()).collect();
        format!(
            "Blocks: {}\nCurrent state: {}\nGoal: {}",
            state.names.join(" "),
            self.canonical_key(state).replace(' ', ", "),
            goal_text.join(", ")
        )
    }
}

/// Plan validation: every action applicable in turn, the goal holds at the end, and the plan is within the step bound.
pub fn blocksworld_validate(goal: &BlocksGoal, plan: &[String]) -> bool {
    Blocksworld.verify(goal, &plan.to_vec())
}

/// One randomly generated instance in dataset form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlocksRecord {
    pub blocks: Vec<String>,
    pub init: Vec<String>,
    pub goal: Vec<String>,
    pub min_steps: usize,
}

fn random_towers(rng: &mut ChaCha8Rng, names: &[String]) -> Vec<Pred> {
    let mut order: Vec<&String> = names.iter().collect();
    order.shuffle(rng);
    let mut preds = Vec::new();
    let mut below: Option<&String> = None;
    for b in order {
        match below {
            Some(y) if rng.gen_bool(0.6) => preds.push(Pred::On(b.clone(), y.clone())),
            _ => preds.push(Pred::OnTable(b.clone())),
        }
        below = Some(b);
    }
    preds
}

/// Random tower-to-tower instances with `blocks` blocks whose shortest plan length lies in `steps`.
pub fn generate(seed: u64, count: usize, blocks: std::ops::RangeInclusive<usize>, steps: std::ops::RangeInclusive<usize>) -> Vec<BlocksRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut tries = 0;
    while out.len() < count && tries < count * 1000 {
        tries += 1;
        let n = rng.gen_range(blocks.clone());
        let names: Vec<String> = (0..n).map(|i| ((b'A' + i as u8) as char).to_string()).collect();
        let init = random_towers(&mut rng, &names);
        let target: Vec<Pred> = random_towers(&mut rng, &names).into_iter().filter(|p| matches!(p, Pred::On(..))).collect();
        if target.is_empty() {
            continue;
        }
        let Ok(goal) = BlocksGoal::new(&names, &init, target.clone()) else { continue };
        if !steps.contains(&goal.min_steps) {
            continue;
        }
        out.push(BlocksRecord {
            blocks: names,
            init: init.iter().map(|p| p.to_string()).collect(),
            goal: target.iter().map(|p| p.to_string()).collect(),
            min_steps: goal.min_steps,
        });
    }
    out
}

impl BlocksRecord {
    pub fn to_goal(&self) -> Result<BlocksGoal, ParseError> {
        let init = self.init.iter().map(|p| parse_pred(p)).collect::<Result<Vec<_>, _>>()?;
        let goal = self.goal.iter().map(|p| parse_pred(p)).collect::<Result<Vec<_>, _>>()?;
        BlocksGoal::new(&self.blocks, &init, goal)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn two_on_table() -> BlocksGoal {
        let init = vec![Pred::OnTable("A".into()), Pred::OnTable("B".into())];
        BlocksGoal::new(&names(&["A", "B"]), &init, vec![Pred::On("A".into(), "B".into())]).unwrap()
    }

    fn labels(v: &[(BlocksAction, BlocksState)]) -> Vec<String> {
        v.iter().map(|(a, _)| Blocksworld.format_action(a)).collect()
    }

    #[test]
    fn two_blocks_on_table_allow_two_pickups() {
        let g = two_on_table();
        assert_eq!(labels(&Blocksworld.decompose(&g, &g.init)), ["pickup A", "pickup B"]);
    }

    #[test]
    fn holding_allows_put_and_stack() {
        let g = two_on_table();
        let held = step(&g.init, &Blocksworld.parse_action("pickup A").unwrap()).unwrap();
        assert_eq!(labels(&Blocksworld.decompose(&g, &held)), ["put A", "stack A B"]);
    }

    #[test]
    fn validation_examples() {
        let g = two_on_table();
        assert_eq!(g.min_steps, 2);
        assert_eq!(g.step_bound(), 2);
        assert!(Blocksworld.verify(&g, &names(&["pickup A", "stack A B"])));
        assert!(!Blocksworld.verify(&g, &names(&["stack A B"])));
        assert!(!Blocksworld.verify(&g, &names(&["pickup B", "put B", "pickup A", "stack A B"])));
        assert!(!Blocksworld.verify(&g, &names(&["pickup A", "stack A Z"])));
        assert!(!Blocksworld.verify(&g, &names(&["pickup A"])));
    }

    #[test]
    fn keys_ignore_listing_order() {
        let n = names(&["A", "B", "C"]);
        let p1 = vec![Pred::On("A".into(), "B".into()), Pred::OnTable("B".into()), Pred::OnTable("C".into())];
        let mut p2 = p1.clone();
        p2.reverse();
        p2.push(Pred::ArmEmpty);
        let s1 = BlocksState::from_preds(&n, &p1).unwrap();
        let s2 = BlocksState::from_preds(&n, &p2).unwrap();
        assert_eq!(Blocksworld.canonical_key(&s1), Blocksworld.canonical_key(&s2));
        assert_eq!(
            Blocksworld.canonical_key(&s1),
            "arm_empty clear(A) clear(C) on(A,B) on_table(B) on_table(C)"
        );
    }

    #[test]
    fn rejects_inconsistent_states() {
        let n = names(&["A", "B"]);
        assert!(BlocksState::from_preds(&n, &[Pred::On("A".into(), "B".into()), Pred::On("B".into(), "A".into())]).is_err());
        assert!(BlocksState::from_preds(&n, &[Pred::OnTable("A".into())]).is_err());
        assert!(BlocksState::from_preds(&n, &[Pred::Holding("A".into()), Pred::Holding("B".into())]).is_err());
        assert!(BlocksState::from_preds(
            &n,
            &[Pred::OnTable("A".into()), Pred::OnTable("B".into()), Pred::Clear("A".into()), Pred::Holding("A".into())]
        )
        .is_err());
        assert!(BlocksState::from_preds(
            &n,
            &[Pred::On("A".into(), "B".into()), Pred::OnTable("B".into()), Pred::Clear("B".into())]
        )
        .is_err());
    }

    #[test]
    fn predicate_spellings() {
        assert_eq!(parse_pred("on(a,b)").unwrap(), Pred::On("A".into(), "B".into()));
        assert_eq!(parse_pred("(on a b)").unwrap(), Pred::On("A".into(), "B".into()));
        assert_eq!(parse_pred("ontable c").unwrap(), Pred::OnTable("C".into()));
        assert_eq!(parse_pred("on_table(C)").unwrap(), Pred::OnTable("C".into()));
        assert_eq!(parse_pred("handempty").unwrap(), Pred::ArmEmpty);
        assert!(parse_pred("on(a)").is_err());
        for p in [Pred::On("A".into(), "B".into()), Pred::Clear("A".into()), Pred::ArmEmpty, Pred::Holding("Q".into())] {
            assert_eq!(parse_pred(&p.to_string()).unwrap(), p);
        }
    }

    #[test]
    fn labels_round_trip_and_tolerate_prose() {
        for label in ["unstack A B", "stack C A", "pickup D", "put E"] {
            assert_eq!(Blocksworld.format_action(&Blocksworld.parse_action(label).unwrap()), label);
        }
        let a = Blocksworld.parse_action("Unstack the a block from on top of the b block").unwrap();
        assert_eq!(Blocksworld.format_action(&a), "unstack A B");
        assert_eq!(Blocksworld.format_action(&Blocksworld.parse_action("pick up the c block").unwrap()), "pickup C");
        assert_eq!(Blocksworld.format_action(&Blocksworld.parse_action("(put-down b)").unwrap()), "put B");
        assert_eq!(Blocksworld.format_action(&Blocksworld.parse_action("2. stack a on b").unwrap()), "stack A B");
        assert!(Blocksworld.parse_action("stack A").is_err());
        assert!(Blocksworld.parse_action("fly A").is_err());
    }

    #[test]
    fn distances_agree_with_min_steps() {
        for rec in generate(3, 10, 3..=4, 2..=8) {
            let g = rec.to_goal().unwrap();
            assert_eq!(g.min_steps, rec.min_steps);
            let dist = goal_distances(&g);
            assert_eq!(dist[&g.init], g.min_steps);
        }
    }

    #[test]
    fn parses_plan_blocks() {
        let g = two_on_table();
        let plan = Blocksworld.parse_answer("[PLAN]\npick up the A block\nstack the A block on top of the B block\n[PLAN END]").unwrap();
        let sol: Vec<String> = plan.iter().map(|a| Blocksworld.format_action(a)).collect();
        assert!(Blocksworld.verify(&g, &sol));
        assert!(Blocksworld.parse_answer("nothing here").is_none());
        assert_eq!(Blocksworld.parse_answer(&Blocksworld.render_answer(&plan)).unwrap(), plan);
    }

    #[test]
    fn pddl_export() {
        let out = Blocksworld.to_pddl_plan(&names(&["pickup A", "stack A B"])).unwrap();
        assert_eq!(out, "(pick-up a)\n(stack a b)");
    }
}
