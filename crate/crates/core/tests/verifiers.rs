//! Verifiers against the independent oracles in `common`, over generated inputs.

mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use seal::domains::blocksworld::blocksworld_validate;
use seal::domains::crosswords::{crosswords_score, grid_words};
use seal::domains::game24::game24_verify;

use common::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn game24_verdicts_match_exact_evaluation(
        nums in prop::collection::vec(1i64..=13, 4),
        seed in any::<u64>(),
        full in any::<bool>(),
        bump in prop::option::of(0usize..4),
    ) {
        let tree = random_tree(&mut ChaCha8Rng::seed_from_u64(seed), &nums);
        let mut inputs = nums.clone();
        if let Some(i) = bump {
            inputs[i] += 1;
        }
        let text = tree.render(full);
        prop_assert_eq!(game24_verify(&inputs, &text), expected_verdict(&inputs, &tree), "{}", text);
    }

    #[test]
    fn rendering_style_does_not_change_the_verdict(nums in prop::collection::vec(1i64..=13, 4), seed in any::<u64>()) {
        let tree = random_tree(&mut ChaCha8Rng::seed_from_u64(seed), &nums);
        prop_assert_eq!(game24_verify(&nums, &tree.render(true)), game24_verify(&nums, &tree.render(false)));
    }

    #[test]
    fn blocksworld_plans_match_strips(seed in 0u64..500, picks in prop::collection::vec(any::<prop::sample::Index>(), 0..10)) {
        let (rec, p) = blocks_instances(seed, 1).pop().unwrap();
        let actions = strips_actions(&rec.blocks);
        let random: Vec<String> = picks.iter().map(|i| i.get(&actions).clone()).collect();
        let shortest = strips_shortest_plan(&rec);
        prop_assert!(blocksworld_validate(&p.goal, &shortest));
        prop_assert_eq!(blocksworld_validate(&p.goal, &random), strips_validate(&rec, &random), "{:?}", random);
        let mut padded = shortest.clone();
        padded.extend(random);
        prop_assert_eq!(blocksworld_validate(&p.goal, &padded), strips_validate(&rec, &padded), "{:?}", padded);
    }

    #[test]
    fn crossword_scores_count_matches(rows in prop::collection::vec("[A-C]{5}", 5), truth in prop::collection::vec("[A-C]{5}", 5)) {
        let s = crosswords_score(&rows, &truth);
        let letters = rows.iter().zip(&truth).map(|(a, b)| a.chars().zip(b.chars()).filter(|(x, y)| x == y).count()).sum::<usize>();
        prop_assert_eq!(s.letter, letters as f64 / 25.0);
        let cols = |g: &[String]| (0..5).map(|c| g.iter().map(|r| r.as_bytes()[c] as char).collect::<String>()).collect::<Vec<_>>();
        let words = rows.iter().zip(&truth).filter(|(a, b)| a == b).count()
            + cols(&rows).iter().zip(cols(&truth)).filter(|(a, b)| **a == *b).count();
        prop_assert_eq!(s.word, words as f64 / 10.0);
        prop_assert_eq!(s.game == 1.0, rows == truth);
        prop_assert_eq!(grid_words(&rows).len(), 10);
    }
}

#[test]
fn quoted_game24_answers() {
    assert!(game24_verify(&[4, 4, 6, 8], "(6 - 4) * (4 + 8) = 24"));
    assert!(game24_verify(&[1, 2, 4, 7], "(7 - 2 + 1) * 4"));
    assert!(game24_verify(&[3, 3, 8, 8], "8 / (3 - 8 / 3)"));
    assert!(!game24_verify(&[4, 4, 6, 8], "(6 - 4) * (4 + 8) + 0"));
    assert!(!game24_verify(&[4, 4, 6, 8], "6 * 4"));
    assert!(!game24_verify(&[1, 1, 1, 1], "1 / 0 + 1 + 1"));
}
