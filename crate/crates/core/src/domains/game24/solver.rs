//! Brute-force expression enumeration by subset splitting.
//!
//! Works on index subsets rather than pairwise replacement, so it shares no code
//! path with [`super::Game24::decompose`] and can serve as its oracle.

use std::collections::BTreeMap;

use num_rational::Rational64;

use super::expr::{Expr, Op};

fn combine(a: &Expr, av: Rational64, b: &Expr, bv: Rational64, mut emit: impl FnMut(Rational64, Expr)) {
    let cases = [
        (Op::Add, false),
        (Op::Mul, false),
        (Op::Sub, false),
        (Op::Sub, true),
        (Op::Div, false),
        (Op::Div, true),
    ];
    for (op, swap) in cases {
        let (l, lv, r, rv) = if swap { (b, bv, a, av) } else { (a, av, b, bv) };
        if let Some(v) = op.apply(lv, rv) {
            emit(v, Expr::bin(op, l.clone(), r.clone()));
        }
    }
}

/// Splits of `mask` into two non-empty halves, each unordered split listed once.
fn splits(mask: usize) -> impl Iterator<Item = (usize, usize)> {
    let low = mask & mask.wrapping_neg();
    let mut sub = (mask - 1) & mask;
    std::iter::from_fn(move || {
        while sub != 0 {
            let s = sub;
            sub = (sub - 1) & mask;
            if s & low != 0 {
                return Some((s, mask ^ s));
            }
        }
        None
    })
}

/// Every value reachable using all of `nums` exactly once, each with the first expression found.
pub fn value_table(nums: &[Rational64]) -> BTreeMap<Rational64, Expr> {
    let n = nums.len();
    assert!(n <= 8, "enumeration is exponential; at most 8 numbers");
    if n == 0 {
        return BTreeMap::new();
    }
    let full = (1usize << n) - 1;
    let mut table: Vec<BTreeMap<Rational64, Expr>> = vec![BTreeMap::new(); full + 1];
    for mask in 1..=full {
        if mask.count_ones() == 1 {
            let i = mask.trailing_zeros() as usize;
            table[mask].insert(nums[i], Expr::Num(nums[i]));
            continue;
        }
        let mut out = BTreeMap::new();
        for (l, r) in splits(mask) {
            for (av, a) in &table[l] {
                for (bv, b) in &table[r] {
                    combine(a, *av, b, *bv, |v, e| {
                        out.entry(v).or_insert(e);
                    });
                }
            }
        }
        table[mask] = out;
    }
    std::mem::take(&mut table[full])
}

/// An expression over all of `nums` that evaluates exactly to `target`.
pub fn solve(nums: &[Rational64], target: Rational64) -> Option<Expr> {
    value_table(nums).remove(&target)
}

/// Every full expression over `nums`, without any deduplication.
pub fn all_expressions(nums: &[Rational64]) -> Vec<Expr> {
    let n = nums.len();
    assert!(n <= 5, "full expression listing is only meant for small inputs");
    if n == 0 {
        return Vec::new();
    }
    let full = (1usize << n) - 1;
    let mut table: Vec<Vec<(Rational64, Expr)>> = vec![Vec::new(); full + 1];
    for mask in 1..=full {
        if mask.count_ones() == 1 {
            let i = mask.trailing_zeros() as usize;
            table[mask].push((nums[i], Expr::Num(nums[i])));
            continue;
        }
        let mut out = Vec::new();
        for (l, r) in splits(mask) {
            for (av, a) in &table[l] {
                for (bv, b) in &table[r] {
                    combine(a, *av, b, *bv, |v, e| out.push((v, e)));
                }
            }
        }
        table[mask] = out;
    }
    std::mem::take(&mut table[full]).into_iter().map(|(_, e)| e).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::game24::expr::parse_expr;

    fn ints(v: &[i64]) -> Vec<Rational64> {
        v.iter().map(|x| Rational64::from_integer(*x)).collect()
    }

    fn twenty_four() -> Rational64 {
        Rational64::from_integer(24)
    }

    #[test]
    fn splits_cover_each_partition_once() {
        let got: Vec<_> = splits(0b111).collect();
        assert_eq!(got.len(), 3);
        for (l, r) in got {
            assert_eq!(l | r, 0b111);
            assert_eq!(l & r, 0);
        }
    }

    #[test]
    fn one_one_has_no_solution() {
        // 1+1, 1*1, 0, 0, 1, 1
        let values: Vec<_> = value_table(&ints(&[1, 1])).into_keys().collect();
        assert_eq!(values, ints(&[0, 1, 2]));
        assert!(solve(&ints(&[1, 1]), twenty_four()).is_none());
    }

    #[test]
    fn solves_known_puzzles() {
        for p in [[4, 4, 6, 8], [4, 5, 6, 10], [1, 2, 4, 7], [3, 3, 7, 12], [3, 3, 8, 8]] {
            let e = solve(&ints(&p), twenty_four()).unwrap_or_else(|| panic!("{p:?}"));
            assert_eq!(e.eval(), Some(twenty_four()));
            let mut leaves = e.leaves();
            leaves.sort();
            assert_eq!(leaves, ints(&p));
        }
    }

    #[test]
    fn full_listing_contains_quoted_answer() {
        let target = parse_expr("(6 - 4) * (4 + 8)").unwrap();
        let all = all_expressions(&ints(&[4, 4, 6, 8]));
        assert!(all.iter().any(|e| e.eval() == target.eval() && e.to_string() == target.to_string()));
    }

    #[test]
    fn listing_size_for_two_and_three_numbers() {
        // two numbers: 6 orientations; three: 3 splits * 6 * 6
        assert_eq!(all_expressions(&ints(&[2, 3])).len(), 6);
        assert_eq!(all_expressions(&ints(&[2, 3, 5])).len(), 108);
    }
}
