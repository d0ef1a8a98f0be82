//! Per-run context shared by an algorithm and its advisor.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::domain::{Domain, PlanningProblem};
use crate::search::{Halt, Meter, SearchBudget, StepKind};

/// Keys seen while expanding one state in the two-phase search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionLog {
    pub parent: String,
    pub decomposition: Vec<String>,
    pub phase1: Vec<String>,
    pub phase2: Vec<String>,
}

pub struct Session<'a, D: Domain> {
    pub domain: &'a D,
    pub problem: &'a PlanningProblem<D>,
    pub meter: Meter,
    /// Randomness for seeded advisors; derived from (seed, problem id).
    pub rng: ChaCha8Rng,
    /// Advisor calls that failed after all retries.
    pub advisor_failures: u32,
    /// Canonical keys of visited states in visit order, when recording.
    pub trace: Option<Vec<String>>,
    pub expansions: Option<Vec<ExpansionLog>>,
}

/// Seed of the per-run random stream.
pub fn stream_seed(seed: u64, problem_id: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(problem_id.as_bytes());
    let d = h.finalize();
    u64::from_le_bytes(d[..8].try_into().expect("8 bytes"))
}

impl<'a, D: Domain> Session<'a, D> {
    pub fn new(domain: &'a D, problem: &'a PlanningProblem<D>, budget: SearchBudget, seed: u64) -> Self {
        Self {
            domain,
            problem,
            meter: Meter::new(budget),
            rng: ChaCha8Rng::seed_from_u64(stream_seed(seed, &problem.id)),
            advisor_failures: 0,
            trace: None,
            expansions: None,
        }
    }

    pub fn recording(mut self) -> Self {
        self.trace = Some(Vec::new());
        self.expansions = Some(Vec::new());
        self
    }

    pub fn goal(&self) -> &'a D::Goal {
        &self.problem.goal
    }

    /// Charges `n` steps; a zero charge is a no-op.
    pub fn charge(&mut self, kind: StepKind, n: u64) -> Result<(), Halt> {
        if n == 0 {
            return self.meter.check_deadline();
        }
        self.meter.charge(kind, n)
    }

    pub fn visit(&mut self, key: &str) {
        if let Some(t) = &mut self.trace {
            t.push(key.to_string());
        }
    }

    pub fn log_expansion(&mut self, log: ExpansionLog) {
        if let Some(e) = &mut self.expansions {
            e.push(log);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stream_depends_on_seed_and_problem() {
        assert_eq!(stream_seed(1, "p"), stream_seed(1, "p"));
        assert_ne!(stream_seed(1, "p"), stream_seed(2, "p"));
        assert_ne!(stream_seed(1, "p"), stream_seed(1, "q"));
    }
}
