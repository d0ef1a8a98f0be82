//! Offline advisors backed by exact reachability: perfect, adversarial, and noisy.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_rational::Rational64;
use rand::Rng;

use super::{Advisor, Bucket, CandidateSolution, ProposeUse, ValueUse};
use crate::domain::{expand, Domain};
use crate::domains::blocksworld::{goal_distances, BlocksAction, BlocksState, Blocksworld, Verb};
use crate::domains::crosswords::{complete_grid, Crosswords, CrosswordsGoal, SIZE};
use crate::domains::game24::{solver, Expr, Game24, Game24Goal, Op};
use crate::search::{Halt, SearchState, StepKind};
use crate::session::Session;

/// Ground truth about a problem, computed by exhaustive search.
pub trait OracleDomain: Domain {
    type Oracle: Send + Sync + 'static;

    fn build_oracle(&self, goal: &Self::Goal) -> Self::Oracle;

    /// True when a verifier-accepted solution extends the path to `state`.
    fn oracle_reachable(&self, oracle: &Self::Oracle, goal: &Self::Goal, state: &SearchState<Self>) -> bool;

    /// A correct answer at `state`, if one exists.
    fn oracle_answer(&self, oracle: &Self::Oracle, goal: &Self::Goal, state: &SearchState<Self>) -> Option<Self::Answer>;

    /// A well-formed answer at `state` that the verifier rejects.
    fn decoy_answer(&self, goal: &Self::Goal, state: &SearchState<Self>) -> Self::Answer;
}

pub struct Game24Oracle {
    memo: Mutex<HashMap<String, Option<Expr>>>,
}

impl Game24Oracle {
    fn solve(&self, nums: &[Rational64]) -> Option<Expr> {
        let key = crate::domains::game24::fmt_rational_list(nums);
        if let Some(hit) = self.memo.lock().expect("oracle memo").get(&key) {
            return hit.clone();
        }
        let found = solver::solve(nums, Rational64::from_integer(crate::domains::game24::TARGET));
        self.memo.lock().expect("oracle memo").insert(key, found.clone());
        found
    }
}

impl OracleDomain for Game24 {
    type Oracle = Game24Oracle;

    fn build_oracle(&self, _goal: &Game24Goal) -> Game24Oracle {
        Game24Oracle { memo: Mutex::new(HashMap::new()) }
    }

    fn oracle_reachable(&self, oracle: &Game24Oracle, _goal: &Game24Goal, state: &SearchState<Self>) -> bool {
        oracle.solve(state.payload.numbers()).is_some()
    }

    fn oracle_answer(&self, oracle: &Game24Oracle, _goal: &Game24Goal, state: &SearchState<Self>) -> Option<Expr> {
        oracle.solve(state.payload.numbers())
    }

    fn decoy_answer(&self, _goal: &Game24Goal, state: &SearchState<Self>) -> Expr {
        let nums = state.payload.numbers();
        let fold = |op: Op| {
            nums.iter()
                .skip(1)
                .fold(Expr::Num(nums.first().copied().unwrap_or_default()), |acc, n| Expr::bin(op, acc, Expr::Num(*n)))
        };
        let twenty_four = Some(Rational64::from_integer(crate::domains::game24::TARGET));
        [fold(Op::Add), fold(Op::Mul), fold(Op::Sub)]
            .into_iter()
            .find(|e| e.eval() != twenty_four)
            .unwrap_or_else(|| Expr::bin(Op::Add, fold(Op::Add), Expr::num(1)))
    }
}

pub struct CrosswordsOracle {
    memo: Mutex<HashMap<String, Option<Vec<String>>>>,
}

impl CrosswordsOracle {
    fn completion(&self, goal: &CrosswordsGoal, state: &SearchState<Crosswords>) -> Option<Vec<String>> {
        if let Some(hit) = self.memo.lock().expect("oracle memo").get(&state.key) {
            return hit.clone();
        }
        let truth_fits = goal.ground_truth.as_ref().filter(|truth| {
            Crosswords.complete_answer(goal, state, truth).is_some() && Crosswords.verify(goal, truth)
        });
        let found = truth_fits.cloned().or_else(|| complete_grid(goal, &state.payload));
        self.memo.lock().expect("oracle memo").insert(state.key.clone(), found.clone());
        found
    }
}

impl OracleDomain for Crosswords {
    type Oracle = CrosswordsOracle;

    fn build_oracle(&self, _goal: &CrosswordsGoal) -> CrosswordsOracle {
        CrosswordsOracle { memo: Mutex::new(HashMap::new()) }
    }

    fn oracle_reachable(&self, oracle: &CrosswordsOracle, goal: &CrosswordsGoal, state: &SearchState<Self>) -> bool {
        oracle.completion(goal, state).is_some()
    }

    fn oracle_answer(&self, oracle: &CrosswordsOracle, goal: &CrosswordsGoal, state: &SearchState<Self>) -> Option<Vec<String>> {
        oracle.completion(goal, state)
    }

    fn decoy_answer(&self, _goal: &CrosswordsGoal, state: &SearchState<Self>) -> Vec<String> {
        let mut rows = state.payload.rows();
        if !rows.iter().any(|r| r.contains('_')) {
            // A full board needs a visible change to be wrong.
            rows[SIZE - 1] = "QQQQQ".into();
        }
        rows.into_iter().map(|r| r.replace('_', "Q")).collect()
    }
}

pub struct BlocksOracle {
    dist: HashMap<BlocksState, usize>,
}

impl OracleDomain for Blocksworld {
    type Oracle = BlocksOracle;

    fn build_oracle(&self, goal: &Self::Goal) -> BlocksOracle {
        BlocksOracle { dist: goal_distances(goal) }
    }

    fn oracle_reachable(&self, oracle: &BlocksOracle, goal: &Self::Goal, state: &SearchState<Self>) -> bool {
        oracle.dist.get(&state.payload).is_some_and(|d| state.depth() + d <= goal.step_bound())
    }

    fn oracle_answer(&self, oracle: &BlocksOracle, goal: &Self::Goal, state: &SearchState<Self>) -> Option<Vec<BlocksAction>> {
        if !self.oracle_reachable(oracle, goal, state) {
            return None;
        }
        let mut plan = Vec::new();
        let mut cur = state.payload.clone();
        while !goal.satisfied(&cur) {
            let d = oracle.dist[&cur];
            let (a, next) = self
                .decompose(goal, &cur)
                .into_iter()
                .find(|(_, n)| oracle.dist.get(n) == Some(&(d - 1)))?;
            plan.push(a);
            cur = next;
        }
        Some(plan)
    }

    fn decoy_answer(&self, _goal: &Self::Goal, state: &SearchState<Self>) -> Vec<BlocksAction> {
        // Putting down an unheld block, or picking up while holding, always fails.
        let first = state.payload.names()[0].clone();
        let verb = if state.payload.holding().is_some() { Verb::Pickup } else { Verb::Put };
        vec![BlocksAction { verb, x: first, y: None }]
    }
}

/// Caches one oracle per problem id.
pub struct OracleCache<D: OracleDomain> {
    cache: Mutex<HashMap<String, Arc<D::Oracle>>>,
}

impl<D: OracleDomain> Default for OracleCache<D> {
    fn default() -> Self {
        Self { cache: Mutex::new(HashMap::new()) }
    }
}

impl<D: OracleDomain> OracleCache<D> {
    pub fn get(&self, s: &Session<'_, D>) -> Arc<D::Oracle> {
        let id = &s.problem.id;
        if let Some(o) = self.cache.lock().expect("oracle cache").get(id) {
            return o.clone();
        }
        let built = Arc::new(s.domain.build_oracle(s.goal()));
        self.cache.lock().expect("oracle cache").entry(id.clone()).or_insert(built).clone()
    }
}

/// How a family bends the truth.
#[derive(Clone, Copy, Debug, PartialEq)]
enum Mode {
    Perfect,
    Adversarial,
    Noisy { error_rate: f64 },
}

struct OracleAdvisor<D: OracleDomain> {
    mode: Mode,
    seed: u64,
    cache: OracleCache<D>,
}

impl<D: OracleDomain> OracleAdvisor<D> {
    fn id(&self) -> String {
        match self.mode {
            Mode::Perfect => "perfect_oracle".into(),
            Mode::Adversarial => "adversarial".into(),
            Mode::Noisy { error_rate } => format!("stochastic(seed={},error_rate={error_rate})", self.seed),
        }
    }

    /// Whether this sample tells the truth.
    fn honest(&self, s: &mut Session<'_, D>) -> bool {
        match self.mode {
            Mode::Perfect => true,
            Mode::Adversarial => false,
            Mode::Noisy { error_rate } => !s.rng.gen_bool(error_rate.clamp(0.0, 1.0)),
        }
    }

    fn reachable(&self, s: &Session<'_, D>, state: &SearchState<D>) -> bool {
        let o = self.cache.get(s);
        s.domain.oracle_reachable(&o, s.goal(), state)
    }

    fn candidate(&self, s: &mut Session<'_, D>, state: &SearchState<D>) -> CandidateSolution<D> {
        let answer = if self.honest(s) {
            let o = self.cache.get(s);
            s.domain.oracle_answer(&o, s.goal(), state)
        } else {
            Some(s.domain.decoy_answer(s.goal(), state))
        };
        match answer {
            Some(a) => CandidateSolution::from_text(s.domain, s.domain.render_answer(&a), &self.id()),
            None => CandidateSolution::empty(&self.id()),
        }
    }

    fn sample_solutions(&self, s: &mut Session<'_, D>, state: &SearchState<D>, n: usize) -> Result<Vec<CandidateSolution<D>>, Halt> {
        s.charge(StepKind::LlmAnswerer, n as u64)?;
        Ok((0..n).map(|_| self.candidate(s, state)).collect())
    }

    fn validity_votes(&self, s: &mut Session<'_, D>, states: &[SearchState<D>], k: usize) -> Result<Vec<Vec<Option<bool>>>, Halt> {
        s.charge(StepKind::LlmValidity, k as u64)?;
        let truth: Vec<bool> = states.iter().map(|st| self.reachable(s, st)).collect();
        let mut out = vec![Vec::with_capacity(k); states.len()];
        for _ in 0..k {
            for (i, t) in truth.iter().enumerate() {
                let honest = self.honest(s);
                out[i].push(Some(if self.mode == Mode::Adversarial { false } else { *t == honest }));
            }
        }
        Ok(out)
    }

    fn value_samples(&self, s: &mut Session<'_, D>, states: &[SearchState<D>], m: usize) -> Result<Vec<Vec<Option<Bucket>>>, Halt> {
        s.charge(StepKind::LlmRanking, (states.len() * m) as u64)?;
        let mut out = Vec::with_capacity(states.len());
        for st in states {
            let truth = if self.reachable(s, st) { Bucket::Sure } else { Bucket::Impossible };
            let samples = (0..m).map(|_| Some(if self.honest(s) { truth } else { truth.inverted() })).collect();
            out.push(samples);
        }
        Ok(out)
    }

    fn propose(&self, s: &mut Session<'_, D>, state: &SearchState<D>) -> Result<Vec<D::Action>, Halt> {
        s.charge(StepKind::LlmAnswerer, 1)?;
        let mut out = Vec::new();
        for child in expand(s.domain, s.goal(), state) {
            let t = self.reachable(s, &child);
            if t == self.honest(s) {
                out.push(child.path.last().cloned().expect("child has an action"));
            }
        }
        Ok(out)
    }

    fn judge(&self, s: &mut Session<'_, D>, candidates: &[D::Solution]) -> Result<Vec<Option<Bucket>>, Halt> {
        s.charge(StepKind::LlmRanking, candidates.len() as u64)?;
        let mut out = Vec::with_capacity(candidates.len());
        for c in candidates {
            let truth = if s.domain.verify(s.goal(), c) { Bucket::Sure } else { Bucket::Impossible };
            out.push(Some(if self.honest(s) { truth } else { truth.inverted() }));
        }
        Ok(out)
    }
}

macro_rules! oracle_family {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        pub struct $name<D: OracleDomain>(OracleAdvisor<D>);

        impl<D: OracleDomain> Advisor<D> for $name<D> {
            fn id(&self) -> String {
                self.0.id()
            }

            fn seed(&self) -> u64 {
                self.0.seed
            }

            fn sample_solutions(
                &self,
                s: &mut Session<'_, D>,
                state: &SearchState<D>,
                n: usize,
            ) -> Result<Vec<CandidateSolution<D>>, Halt> {
                self.0.sample_solutions(s, state, n)
            }

            fn validity_votes(
                &self,
                s: &mut Session<'_, D>,
                states: &[SearchState<D>],
                k: usize,
            ) -> Result<Vec<Vec<Option<bool>>>, Halt> {
                self.0.validity_votes(s, states, k)
            }

            fn value_samples(
                &self,
                s: &mut Session<'_, D>,
                states: &[SearchState<D>],
                m: usize,
                _usage: ValueUse,
            ) -> Result<Vec<Vec<Option<Bucket>>>, Halt> {
                self.0.value_samples(s, states, m)
            }

            fn propose(
                &self,
                s: &mut Session<'_, D>,
                state: &SearchState<D>,
                _usage: ProposeUse,
            ) -> Result<Vec<D::Action>, Halt> {
                self.0.propose(s, state)
            }

            fn judge_solutions(
                &self,
                s: &mut Session<'_, D>,
                candidates: &[D::Solution],
            ) -> Result<Vec<Option<Bucket>>, Halt> {
                self.0.judge(s, candidates)
            }
        }
    };
}

oracle_family!(
    /// Answers from exhaustive search; validity and ranks equal true reachability.
    PerfectOracle
);
oracle_family!(
    /// Prunes everything, inverts every rank, proposes only dead ends, and answers with decoys.
    Adversarial
);
oracle_family!(
    /// The perfect oracle with each sample independently flipped with probability `error_rate`.
    Stochastic
);

impl<D: OracleDomain> PerfectOracle<D> {
    pub fn new() -> Self {
        Self(OracleAdvisor { mode: Mode::Perfect, seed: 0, cache: OracleCache::default() })
    }
}

impl<D: OracleDomain> Default for PerfectOracle<D> {
    fn default() -> Self {
        Self::new()
    }
}

impl<D: OracleDomain> Adversarial<D> {
    pub fn new() -> Self {
        Self(OracleAdvisor { mode: Mode::Adversarial, seed: 0, cache: OracleCache::default() })
    }
}

impl<D: OracleDomain> Default for Adversarial<D> {
    fn default() -> Self {
        Self::new()
    }
}

impl<D: OracleDomain> Stochastic<D> {
    pub fn new(seed: u64, error_rate: f64) -> Self {
        Self(OracleAdvisor { mode: Mode::Noisy { error_rate }, seed, cache: OracleCache::default() })
    }
}
