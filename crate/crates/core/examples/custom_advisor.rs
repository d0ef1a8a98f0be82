//! Plugs a hand-written advisor into SeaL and compares it with the built-in ones.
//!
//! The advisor only judges states with one or two numbers left, where it can check every
//! operation, and shrugs otherwise.
//!
//! cargo run --release --example custom_advisor

use num_rational::Rational64;
use seal::advisor::{Advisor, Bucket, CandidateSolution, NullAdvisor, PerfectOracle, ProposeUse, ValueUse};
use seal::algorithms::run;
use seal::domains::game24::Game24;
use seal::harness::dataset::load_game24;
use seal::search::{Halt, SearchBudget, SearchState, StepKind};
use seal::session::Session;

struct Endgame;

fn judge(nums: &[Rational64]) -> Bucket {
    let t = Rational64::from_integer(24);
    let hit = match nums {
        [a] => *a == t,
        [a, b] => {
            let mut v = vec![a + b, a - b, b - a, a * b];
            if *b != 0.into() {
                v.push(a / b);
            }
            if *a != 0.into() {
                v.push(b / a);
            }
            v.contains(&t)
        }
        _ => return Bucket::Likely,
    };
    if hit {
        Bucket::Sure
    } else {
        Bucket::Impossible
    }
}

impl Advisor<Game24> for Endgame {
    fn id(&self) -> String {
        "endgame".into()
    }

    fn sample_solutions(
        &self,
        s: &mut Session<'_, Game24>,
        _: &SearchState<Game24>,
        n: usize,
    ) -> Result<Vec<CandidateSolution<Game24>>, Halt> {
        s.charge(StepKind::LlmAnswerer, n as u64)?;
        Ok((0..n).map(|_| CandidateSolution::empty("endgame")).collect())
    }

    fn validity_votes(
        &self,
        s: &mut Session<'_, Game24>,
        states: &[SearchState<Game24>],
        k: usize,
    ) -> Result<Vec<Vec<Option<bool>>>, Halt> {
        s.charge(StepKind::LlmValidity, k as u64)?;
        Ok(states.iter().map(|st| vec![Some(judge(st.payload.numbers()) != Bucket::Impossible); k]).collect())
    }

    fn value_samples(
        &self,
        s: &mut Session<'_, Game24>,
        states: &[SearchState<Game24>],
        m: usize,
        _: ValueUse,
    ) -> Result<Vec<Vec<Option<Bucket>>>, Halt> {
        s.charge(StepKind::LlmRanking, (states.len() * m) as u64)?;
        Ok(states.iter().map(|st| vec![Some(judge(st.payload.numbers())); m]).collect())
    }

    fn propose(&self, s: &mut Session<'_, Game24>, _: &SearchState<Game24>, _: ProposeUse) -> Result<Vec<seal::domains::game24::Game24Action>, Halt> {
        s.charge(StepKind::LlmAnswerer, 1)?;
        Ok(Vec::new())
    }

    fn judge_solutions(&self, s: &mut Session<'_, Game24>, candidates: &[String]) -> Result<Vec<Option<Bucket>>, Halt> {
        if !candidates.is_empty() {
            s.charge(StepKind::LlmRanking, candidates.len() as u64)?;
        }
        Ok(vec![Some(Bucket::Likely); candidates.len()])
    }
}

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/game24.csv");
    let problems: Vec<_> = load_game24(path.as_ref()).expect("bundled dataset").problems.into_iter().skip(900).take(100).collect();
    let oracle = PerfectOracle::<Game24>::new();
    let advisors: [&dyn Advisor<Game24>; 3] = [&NullAdvisor, &Endgame, &oracle];
    for alg in ["seal", "seal_c"] {
        let cfg = alg.parse().expect("label");
        for a in advisors {
            let recs: Vec<_> =
                problems.iter().map(|p| run(&Game24, p, &cfg, a, SearchBudget::UNLIMITED, "").expect("run")).collect();
            let solved = recs.iter().filter(|r| r.solved).count();
            let ss = recs.iter().map(|r| r.total_ss).sum::<u64>() as f64 / recs.len() as f64;
            println!("{alg:<7} {:<15} solved {solved:>3}/100  avg SS {ss:>8.1}", a.id());
        }
    }
}
