//! Search algorithms against brute-force and simulator oracles.

mod common;

use proptest::prelude::*;
use seal::advisor::{Adversarial, Advisor, NullAdvisor, PerfectOracle, Stochastic};
use seal::algorithms::{run, AlgorithmConfig, AlgorithmId};
use seal::domains::blocksworld::Blocksworld;
use seal::domains::game24::{game24_verify, Game24};
use seal::search::{RunRecord, SearchBudget};

use common::*;

fn go(inputs: &[i64], alg: &str, advisor: &dyn Advisor<Game24>, budget: SearchBudget) -> RunRecord {
    let p = Game24.problem("p", inputs);
    run(&Game24, &p, &alg.parse::<AlgorithmConfig>().unwrap(), advisor, budget, "t").unwrap()
}

fn submitted(r: &RunRecord) -> Option<String> {
    r.solution.as_ref().and_then(|v| v.as_str().map(String::from))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn complete_searches_agree_with_brute_force(nums in prop::collection::vec(1i64..=13, 4), seed in 0u64..1000) {
        let want = solvable(&nums);
        let stochastic = Stochastic::<Game24>::new(seed, 0.5);
        let adversarial = Adversarial::<Game24>::new();
        let runs: [(&str, &dyn Advisor<Game24>); 6] = [
            ("dfs", &NullAdvisor),
            ("bfs_prune", &NullAdvisor),
            ("exhaustive", &NullAdvisor),
            ("seal_c", &NullAdvisor),
            ("seal_c", &stochastic),
            ("seal_c", &adversarial),
        ];
        for (alg, a) in runs {
            let r = go(&nums, alg, a, SearchBudget::UNLIMITED);
            prop_assert_eq!(r.solved, want, "{} with {} on {:?}", alg, a.id(), nums);
            if r.solved {
                prop_assert!(game24_verify(&nums, &submitted(&r).unwrap()));
            }
        }
    }

    #[test]
    fn solved_means_verified(nums in prop::collection::vec(1i64..=13, 4), seed in 0u64..1000, rate in 0.0f64..=1.0) {
        let a = Stochastic::<Game24>::new(seed, rate);
        for id in AlgorithmId::ALL {
            let r = go(&nums, id.as_str(), &a, SearchBudget::UNLIMITED);
            let ok = submitted(&r).is_some_and(|s| game24_verify(&nums, &s));
            prop_assert_eq!(r.solved, ok, "{}", id);
            prop_assert!(r.stats_identity_holds());
        }
    }

    #[test]
    fn step_budget_is_never_exceeded(nums in prop::collection::vec(1i64..=13, 4), budget in 0u64..60, seed in 0u64..100) {
        let a = Stochastic::<Game24>::new(seed, 0.3);
        for id in AlgorithmId::ALL {
            let r = go(&nums, id.as_str(), &a, SearchBudget::steps(budget));
            prop_assert!(r.total_ss <= budget, "{} spent {} of {}", id, r.total_ss, budget);
        }
    }

    #[test]
    fn seeded_runs_repeat(nums in prop::collection::vec(1i64..=13, 4), seed in 0u64..1000) {
        let a = Stochastic::<Game24>::new(seed, 0.4);
        for alg in ["seal", "beam_rv", "majority_vote"] {
            let mut x = go(&nums, alg, &a, SearchBudget::UNLIMITED);
            let mut y = go(&nums, alg, &a, SearchBudget::UNLIMITED);
            x.elapsed_ms = 0;
            y.elapsed_ms = 0;
            prop_assert_eq!(x, y);
        }
    }
}

#[test]
fn blocksworld_plans_replay_in_the_simulator() {
    let oracle = PerfectOracle::<Blocksworld>::new();
    for (rec, p) in blocks_instances(5, 25) {
        for (alg, a) in [("bfs", &NullAdvisor as &dyn Advisor<Blocksworld>), ("seal", &oracle), ("seal_c", &NullAdvisor)] {
            let r = run(&Blocksworld, &p, &alg.parse().unwrap(), a, SearchBudget::UNLIMITED, "t").unwrap();
            assert!(r.solved, "{alg} on {}", p.id);
            let plan: Vec<String> = serde_json::from_value(r.solution.clone().unwrap()).unwrap();
            assert!(strips_validate(&rec, &plan), "{alg} plan {plan:?}");
        }
    }
}

#[test]
fn bfs_plans_are_shortest() {
    for (rec, p) in blocks_instances(9, 15) {
        let r = run(&Blocksworld, &p, &"bfs".parse().unwrap(), &NullAdvisor, SearchBudget::UNLIMITED, "t").unwrap();
        let plan: Vec<String> = serde_json::from_value(r.solution.unwrap()).unwrap();
        assert_eq!(plan.len(), strips_shortest_plan(&rec).len());
    }
}

#[test]
fn oracle_direct_solve_costs_one_call_and_one_check() {
    let r = go(&[4, 6, 4, 8], "seal", &PerfectOracle::<Game24>::new(), SearchBudget::UNLIMITED);
    assert!(r.solved);
    assert_eq!((r.stats.llm_calls(), r.stats.ext_calls()), (1, 1));
}

#[test]
fn unsolvable_inputs_exhaust_without_answer() {
    assert!(!solvable(&[1, 1, 1, 1]));
    let r = go(&[1, 1, 1, 1], "seal_c", &Adversarial::<Game24>::new(), SearchBudget::UNLIMITED);
    assert!(!r.solved);
    assert!(r.halt.is_none());
}
