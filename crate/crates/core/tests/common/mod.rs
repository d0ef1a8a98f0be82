//! Independent oracles and fixtures shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::path::PathBuf;

use rand::Rng;
use seal::domain::PlanningProblem;
use seal::domains::blocksworld::{generate, BlocksRecord, Blocksworld};
use seal::domains::crosswords::Crosswords;
use seal::domains::game24::Game24;
use seal::harness::dataset;
use seal::harness::experiment::prepare;
use seal::harness::Selection;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

/// The 100-problem benchmark slice.
pub fn game24_slice() -> Vec<PlanningProblem<Game24>> {
    let loaded = dataset::load_game24(&data("game24.csv")).expect("game24 data");
    let sel = Selection { range: Some([900, 1000]), ..Default::default() };
    prepare(loaded.problems, &sel, None).into_iter().map(|(p, _)| p).collect()
}

pub fn crosswords_first(n: usize) -> Vec<PlanningProblem<Crosswords>> {
    let loaded = dataset::load_crosswords(&data("crosswords.json")).expect("crosswords data");
    loaded.problems.into_iter().take(n).collect()
}

/// Random instances with shortest plans of 2 to 8 steps.
pub fn blocks_instances(seed: u64, n: usize) -> Vec<(BlocksRecord, PlanningProblem<Blocksworld>)> {
    generate(seed, n, 3..=5, 2..=8)
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            let g = r.to_goal().expect("generated goal");
            let p = Blocksworld.problem(format!("bw/{seed}/{i}"), g);
            (r, p)
        })
        .collect()
}

// ---------------------------------------------------------------- exact fractions

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Frac {
    pub n: i128,
    pub d: i128,
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl Frac {
    pub fn int(n: i64) -> Self {
        Frac { n: n as i128, d: 1 }
    }

    fn norm(n: i128, d: i128) -> Self {
        let g = gcd(n, d).max(1);
        let s = if d < 0 { -1 } else { 1 };
        Frac { n: s * n / g, d: s * d / g }
    }

    pub fn apply(self, op: char, o: Frac) -> Option<Frac> {
        Some(match op {
            '+' => Frac::norm(self.n * o.d + o.n * self.d, self.d * o.d),
            '-' => Frac::norm(self.n * o.d - o.n * self.d, self.d * o.d),
            '*' => Frac::norm(self.n * o.n, self.d * o.d),
            '/' if o.n != 0 => Frac::norm(self.n * o.d, self.d * o.n),
            _ => return None,
        })
    }
}

/// Expression trees built and evaluated without the crate's parser.
#[derive(Clone, Debug)]
pub enum Tree {
    Leaf(i64),
    Node(char, Box<Tree>, Box<Tree>),
}

fn prec(op: char) -> u8 {
    if op == '+' || op == '-' {
        1
    } else {
        2
    }
}

impl Tree {
    pub fn eval(&self) -> Option<Frac> {
        match self {
            Tree::Leaf(n) => Some(Frac::int(*n)),
            Tree::Node(op, l, r) => l.eval()?.apply(*op, r.eval()?),
        }
    }

    pub fn leaves(&self) -> Vec<i64> {
        match self {
            Tree::Leaf(n) => vec![*n],
            Tree::Node(_, l, r) => {
                let mut v = l.leaves();
                v.extend(r.leaves());
                v
            }
        }
    }

    /// Renders with every binary node parenthesized, or with only the parentheses precedence needs.
    pub fn render(&self, full: bool) -> String {
        match self {
            Tree::Leaf(n) => n.to_string(),
            Tree::Node(op, l, r) => {
                let wrap = |t: &Tree, right: bool| {
                    let s = t.render(full);
                    let need = match t {
                        Tree::Leaf(_) => false,
                        Tree::Node(_, _, _) if full => true,
                        Tree::Node(c, _, _) => prec(*c) < prec(*op) || (right && prec(*c) == prec(*op) && (*op == '-' || *op == '/')),
                    };
                    if need {
                        format!("({s})")
                    } else {
                        s
                    }
                };
                format!("{} {op} {}", wrap(l, false), wrap(r, true))
            }
        }
    }
}

/// A random tree over `nums` in a random shape.
pub fn random_tree(rng: &mut impl Rng, nums: &[i64]) -> Tree {
    let mut pool: Vec<Tree> = nums.iter().map(|n| Tree::Leaf(*n)).collect();
    while pool.len() > 1 {
        let i = rng.gen_range(0..pool.len());
        let a = pool.swap_remove(i);
        let j = rng.gen_range(0..pool.len());
        let b = pool.swap_remove(j);
        let op = ['+', '-', '*', '/'][rng.gen_range(0..4)];
        pool.push(Tree::Node(op, Box::new(a), Box::new(b)));
    }
    pool.pop().expect("one tree")
}

/// Whether any expression over `nums` reaches 24, by exhaustive pairing.
pub fn solvable(nums: &[i64]) -> bool {
    fn go(v: Vec<Frac>) -> bool {
        if v.len() == 1 {
            return v[0] == Frac::int(24);
        }
        for i in 0..v.len() {
            for j in 0..v.len() {
                if i == j {
                    continue;
                }
                let rest: Vec<Frac> = (0..v.len()).filter(|k| *k != i && *k != j).map(|k| v[k]).collect();
                for op in ['+', '-', '*', '/'] {
                    if let Some(r) = v[i].apply(op, v[j]) {
                        let mut next = rest.clone();
                        next.push(r);
                        if go(next) {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }
    go(nums.iter().map(|n| Frac::int(*n)).collect())
}

/// The verdict a correct checker must give for `tree` against `inputs`.
pub fn expected_verdict(inputs: &[i64], tree: &Tree) -> bool {
    let mut a = tree.leaves();
    let mut b = inputs.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    a == b && tree.eval() == Some(Frac::int(24))
}

// ---------------------------------------------------------------- STRIPS simulator

pub type Facts = BTreeSet<String>;

/// Initial facts from `on(X,Y)` / `on_table(X)` lists, with clear and hand-empty derived.
pub fn initial_facts(blocks: &[String], init: &[String]) -> Facts {
    let mut f: Facts = init.iter().map(|p| p.replace(' ', "").to_ascii_lowercase()).collect();
    for b in blocks {
        let b = b.to_ascii_lowercase();
        if !f.iter().any(|p| p.starts_with("on(") && p.ends_with(&format!(",{b})"))) {
            f.insert(format!("clear({b})"));
        }
    }
    f.insert("handempty".into());
    f
}

/// Applies a STRIPS action given as text (`pickup a`, `stack a b`, ...).
pub fn strips_step(f: &Facts, action: &str) -> Option<Facts> {
    let w: Vec<String> = action.split_whitespace().map(|s| s.to_ascii_lowercase()).collect();
    let has = |p: String| f.contains(&p);
    let (pre, add, del): (Vec<String>, Vec<String>, Vec<String>) = match w.iter().map(String::as_str).collect::<Vec<_>>()[..] {
        ["pickup", x] => (
            vec![format!("clear({x})"), format!("on_table({x})"), "handempty".into()],
            vec![format!("holding({x})")],
            vec![format!("clear({x})"), format!("on_table({x})"), "handempty".into()],
        ),
        ["put", x] => (
            vec![format!("holding({x})")],
            vec![format!("on_table({x})"), format!("clear({x})"), "handempty".into()],
            vec![format!("holding({x})")],
        ),
        ["stack", x, y] if x != y => (
            vec![format!("holding({x})"), format!("clear({y})")],
            vec![format!("on({x},{y})"), format!("clear({x})"), "handempty".into()],
            vec![format!("holding({x})"), format!("clear({y})")],
        ),
        ["unstack", x, y] => (
            vec![format!("on({x},{y})"), format!("clear({x})"), "handempty".into()],
            vec![format!("holding({x})"), format!("clear({y})")],
            vec![format!("on({x},{y})"), format!("clear({x})"), "handempty".into()],
        ),
        _ => return None,
    };
    if !pre.into_iter().all(has) {
        return None;
    }
    let mut next = f.clone();
    for d in del {
        next.remove(&d);
    }
    next.extend(add);
    Some(next)
}

pub fn strips_actions(blocks: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    for x in blocks {
        out.push(format!("pickup {x}"));
        out.push(format!("put {x}"));
        for y in blocks {
            if x != y {
                out.push(format!("stack {x} {y}"));
                out.push(format!("unstack {x} {y}"));
            }
        }
    }
    out
}

fn goal_met(f: &Facts, goal: &[String]) -> bool {
    goal.iter().all(|g| f.contains(&g.replace(' ', "").to_ascii_lowercase()))
}

/// Shortest plan by breadth-first search over fact sets.
pub fn strips_shortest_plan(r: &BlocksRecord) -> Vec<String> {
    let start = initial_facts(&r.blocks, &r.init);
    let actions = strips_actions(&r.blocks);
    let mut prev: HashMap<Facts, Option<(Facts, String)>> = HashMap::from([(start.clone(), None)]);
    let mut queue = VecDeque::from([start]);
    while let Some(f) = queue.pop_front() {
        if goal_met(&f, &r.goal) {
            let mut plan = Vec::new();
            let mut cur = f;
            while let Some(Some((p, a))) = prev.get(&cur).cloned() {
                plan.push(a);
                cur = p;
            }
            plan.reverse();
            return plan;
        }
        for a in &actions {
            if let Some(n) = strips_step(&f, a) {
                if !prev.contains_key(&n) {
                    prev.insert(n.clone(), Some((f.clone(), a.clone())));
                    queue.push_back(n);
                }
            }
        }
    }
    panic!("unreachable goal")
}

/// Valid iff applicable throughout, goal reached, and no longer than 1.2x the shortest plan.
pub fn strips_validate(r: &BlocksRecord, plan: &[String]) -> bool {
    let bound = strips_shortest_plan(r).len() * 6 / 5;
    if plan.len() > bound {
        return false;
    }
    let mut f = initial_facts(&r.blocks, &r.init);
    for a in plan {
        match strips_step(&f, a) {
            Some(n) => f = n,
            None => return false,
        }
    }
    goal_met(&f, &r.goal)
}

pub fn solved_set(recs: &[seal::search::RunRecord]) -> BTreeSet<String> {
    recs.iter().filter(|r| r.solved).map(|r| r.problem_id.clone()).collect()
}
