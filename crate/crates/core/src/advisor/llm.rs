//! The advisor backed by a chat model.

use std::sync::Arc;

use super::{Advisor, Bucket, CandidateSolution, ProposeUse, ValueUse};
use crate::llm::client::{ChatBackend, ChatError};
use crate::llm::parse::{parse_value, validity_votes};
use crate::llm::prompts::PromptDomain;
use crate::llm::LlmSettings;
use crate::search::{Halt, SearchState, StepKind};
use crate::session::Session;

pub struct LlmAdvisor {
    backend: Arc<dyn ChatBackend>,
    settings: LlmSettings,
    beam_width: usize,
}

impl LlmAdvisor {
    pub fn new(backend: Arc<dyn ChatBackend>, settings: LlmSettings) -> Self {
        Self { backend, settings, beam_width: 5 }
    }

    pub fn with_beam_width(mut self, width: usize) -> Self {
        self.beam_width = width;
        self
    }

    pub fn settings(&self) -> &LlmSettings {
        &self.settings
    }

    /// Issues one request for `n` samples. The budget is checked first; the `n` steps are
    /// charged only once the model has answered. A dead endpoint yields `None`.
    fn ask<D: PromptDomain>(
        &self,
        s: &mut Session<'_, D>,
        kind: StepKind,
        prompt: String,
        n: usize,
    ) -> Result<Option<Vec<String>>, Halt> {
        s.meter.ensure(n as u64)?;
        match self.backend.complete(&self.settings.request(prompt, n)) {
            Ok(done) => {
                s.meter.note_retries(done.retries as u64);
                s.charge(kind, n as u64)?;
                let mut choices = done.response.choices;
                choices.resize(n, String::new());
                Ok(Some(choices))
            }
            Err(ChatError::Config(m)) => Err(Halt::Config(m)),
            Err(ChatError::Unavailable { retries, message }) => {
                log::warn!("advisor call failed: {message}");
                s.meter.note_retries(retries as u64);
                s.advisor_failures += 1;
                Ok(None)
            }
        }
    }
}

impl<D: PromptDomain> Advisor<D> for LlmAdvisor {
    fn id(&self) -> String {
        format!("llm({})", self.settings.model)
    }

    fn seed(&self) -> u64 {
        self.settings.seed.unwrap_or(0)
    }

    fn sample_solutions(
        &self,
        s: &mut Session<'_, D>,
        state: &SearchState<D>,
        n: usize,
    ) -> Result<Vec<CandidateSolution<D>>, Halt> {
        let prompt = s.domain.solve_prompt(s.goal(), state);
        let id = Advisor::<D>::id(self);
        Ok(match self.ask(s, StepKind::LlmAnswerer, prompt, n)? {
            Some(texts) => texts.into_iter().map(|t| CandidateSolution::from_text(s.domain, t, &id)).collect(),
            None => (0..n).map(|_| CandidateSolution::empty(&id)).collect(),
        })
    }

    fn validity_votes(
        &self,
        s: &mut Session<'_, D>,
        states: &[SearchState<D>],
        k: usize,
    ) -> Result<Vec<Vec<Option<bool>>>, Halt> {
        let prompt = s.domain.validity_prompt(s.goal(), states);
        let mut out = vec![Vec::with_capacity(k); states.len()];
        if let Some(texts) = self.ask(s, StepKind::LlmValidity, prompt, k)? {
            for t in texts {
                for (i, v) in validity_votes(&t, states.len()).into_iter().enumerate() {
                    out[i].push(v);
                }
            }
        }
        Ok(out)
    }

    fn value_samples(
        &self,
        s: &mut Session<'_, D>,
        states: &[SearchState<D>],
        m: usize,
        usage: ValueUse,
    ) -> Result<Vec<Vec<Option<Bucket>>>, Halt> {
        let mut out = Vec::with_capacity(states.len());
        for st in states {
            let prompt = s.domain.value_prompt(s.goal(), st, usage);
            out.push(match self.ask(s, StepKind::LlmRanking, prompt, m)? {
                Some(texts) => texts.iter().map(|t| parse_value(t)).collect(),
                None => Vec::new(),
            });
        }
        Ok(out)
    }

    fn propose(&self, s: &mut Session<'_, D>, state: &SearchState<D>, usage: ProposeUse) -> Result<Vec<D::Action>, Halt> {
        let prompt = s.domain.propose_prompt(s.goal(), state, usage, self.beam_width);
        Ok(match self.ask(s, StepKind::LlmAnswerer, prompt, 1)? {
            Some(texts) => s.domain.parse_proposal(&texts[0]),
            None => Vec::new(),
        })
    }

    fn judge_solutions(&self, s: &mut Session<'_, D>, candidates: &[D::Solution]) -> Result<Vec<Option<Bucket>>, Halt> {
        let mut out = Vec::with_capacity(candidates.len());
        for c in candidates {
            let prompt = s.domain.judge_prompt(s.goal(), c);
            out.push(self.ask(s, StepKind::LlmRanking, prompt, 1)?.and_then(|t| parse_value(&t[0])));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::advisor::{check_validity, direct_solve, propose_decomposition, rank_states};
    use crate::domain::expand;
    use crate::domains::game24::Game24;
    use crate::llm::client::{ChatRequest, ChatResponse, Completion};
    use crate::search::SearchBudget;

    /// Replies by prompt family with canned text.
    struct Scripted;

    impl ChatBackend for Scripted {
        fn complete(&self, request: &ChatRequest) -> Result<Completion, ChatError> {
            let p = &request.messages[0].content;
            let text = if p.contains("State Precheck") {
                "State Precheck:\nAnswer: yes; Reason: State 1 is likely to reach 24"
            } else if p.contains("Conclusion") {
                "Current numbers: 6 4; Calculation: 6 * 4 = 24; Conclusion: sure"
            } else if p.contains("Possible next steps") {
                "1 + 7 = 8; (left: 2 4 8)\n4 / 2 = 2; (left: 1 2 7)\n99 + 99 = 198"
            } else {
                "Steps: ...\nAnswer: (6 - 4) * (4 + 8) = 24"
            };
            let choices = vec![text.to_string(); request.n];
            Ok(Completion { response: ChatResponse { choices, usage: Default::default(), latency_ms: 0 }, retries: 1 })
        }
    }

    fn advisor() -> LlmAdvisor {
        LlmAdvisor::new(Arc::new(Scripted), LlmSettings::new("test-model"))
    }

    #[test]
    fn direct_solve_parses_and_charges_once() {
        let p = Game24.problem("p", &[4, 4, 6, 8]);
        let mut s = Session::new(&Game24, &p, SearchBudget::UNLIMITED, 0);
        let c = direct_solve(&advisor(), &mut s, &p.initial).unwrap();
        assert_eq!(c.parsed.unwrap().to_string(), "(6 - 4) * (4 + 8)");
        assert_eq!(s.meter.stats().llm_answerer_calls, 1);
        assert_eq!(s.meter.stats().transport_retries, 1);
    }

    #[test]
    fn validity_batch_costs_five() {
        let p = Game24.problem("p", &[1, 2, 4, 7]);
        let kids = expand(&Game24, &p.goal, &p.initial)[..3].to_vec();
        let mut s = Session::new(&Game24, &p, SearchBudget::UNLIMITED, 0);
        let v = check_validity(&advisor(), &mut s, &kids).unwrap();
        assert_eq!(v.per_state.iter().map(|x| x.keep).collect::<Vec<_>>(), [false, true, false]);
        assert_eq!(s.meter.stats().llm_validity_calls, 5);
        let r = rank_states(&advisor(), &mut s, &kids, 1, ValueUse::Rank).unwrap();
        assert_eq!(r.scores, [1.0, 1.0, 1.0]);
        assert_eq!(s.meter.stats().llm_ranking_calls, 3);
    }

    #[test]
    fn proposals_are_membership_filtered() {
        let p = Game24.problem("p", &[1, 2, 4, 7]);
        let kids = expand(&Game24, &p.goal, &p.initial);
        let mut s = Session::new(&Game24, &p, SearchBudget::UNLIMITED, 0);
        let prop = propose_decomposition(&advisor(), &mut s, &p.initial, &kids).unwrap();
        let keys: Vec<&str> = prop.proposed.iter().map(|c| c.key.as_str()).collect();
        assert_eq!(keys, ["2 4 8", "1 2 7"]);
    }

    #[test]
    fn budget_is_checked_before_the_call() {
        let p = Game24.problem("p", &[1, 2, 4, 7]);
        let kids = expand(&Game24, &p.goal, &p.initial);
        let mut s = Session::new(&Game24, &p, SearchBudget::steps(4), 0);
        assert_eq!(check_validity(&advisor(), &mut s, &kids), Err(Halt::BudgetExceeded { limit: 4 }));
        assert_eq!(s.meter.stats().total_ss(), 0);
    }
}
