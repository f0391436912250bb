//! Randomized invariants for the set-family layer, the exact counting
//! layer, and the measure layer. Strategies stay small (n <= 12) so
//! the naive oracles used for cross-checking remain exhaustive.

use ekr3::counting::binom;
use ekr3::family::{Family, IntersectionSpec};
use ekr3::measure::{mu, MeasureParam};
use ekr3::subset::{k_subsets, KSubset};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::collection::btree_set;
use proptest::prelude::*;

/// Random uniform family: picks n, k and a nonempty subset of C([n], k).
fn family_strategy() -> impl Strategy<Value = Family> {
    (4u32..=9, 2u32..=4)
        .prop_flat_map(|(n, k)| {
            let k = k.min(n - 1);
            let all: Vec<KSubset> = k_subsets(n, k).collect();
            let idx = btree_set(0..all.len(), 1..=all.len().min(12));
            (Just(n), Just(k), Just(all), idx)
        })
        .prop_map(|(n, k, all, idx)| {
            let members: Vec<KSubset> = idx.into_iter().map(|i| all[i]).collect();
            Family::make(n, k, members).expect("distinct k-subsets of [n]")
        })
}

/// Shift pair strategy bound to the family's ground set.
fn with_shift_pair() -> impl Strategy<Value = (Family, u32, u32)> {
    family_strategy().prop_flat_map(|f| {
        let n = f.n();
        (Just(f), 1..n).prop_flat_map(move |(f, i)| (Just(f), Just(i), i + 1..=n))
    })
}

/// Literal restatement of the r-wise t-intersection definition over all
/// r-element index subsets (repetition handled by also checking smaller
/// supports, which the subset sweep covers implicitly: an intersection
/// of fewer distinct sets only grows).
fn naive_r_wise(f: &Family, r: u32, t: u32) -> bool {
    let ms = f.members();
    let mut stack = vec![(0usize, 0u32, u64::MAX)];
    while let Some((start, depth, acc)) = stack.pop() {
        if acc.count_ones() < t {
            return false;
        }
        if depth == r {
            continue;
        }
        for (pos, m) in ms.iter().enumerate().skip(start) {
            // Repetition allowed: the same member may be reused, so the
            // recursion does not advance past `pos`.
            stack.push((pos, depth + 1, acc & m.0));
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shift_preserves_sizes((f, i, j) in with_shift_pair()) {
        let g = f.shift_once(i, j).unwrap();
        prop_assert_eq!(g.len(), f.len());
        prop_assert_eq!(g.n(), f.n());
        for m in g.members() {
            prop_assert_eq!(m.len(), f.k());
        }
    }

    #[test]
    fn fixpoint_is_shifted_and_keeps_intersection(f in family_strategy()) {
        let fp = f.shift_fixpoint();
        prop_assert!(fp.is_shifted());
        prop_assert_eq!(fp.len(), f.len());
        for (r, t) in [(2u32, 1u32), (2, 2), (3, 1)] {
            let spec = IntersectionSpec::new(r, t).unwrap();
            if f.is_r_wise_t_intersecting(spec).unwrap() {
                prop_assert!(
                    fp.is_r_wise_t_intersecting(spec).unwrap(),
                    "({r},{t}) lost by compression"
                );
            }
        }
    }

    #[test]
    fn three_wise_implies_two_wise(f in family_strategy()) {
        let s3 = IntersectionSpec::new(3, 1).unwrap();
        let s2 = IntersectionSpec::new(2, 1).unwrap();
        if f.is_r_wise_t_intersecting(s3).unwrap() {
            prop_assert!(f.is_r_wise_t_intersecting(s2).unwrap());
        }
    }

    #[test]
    fn intersection_check_matches_naive(f in family_strategy(), r in 2u32..=4, t in 1u32..=3) {
        let spec = IntersectionSpec::new(r, t).unwrap();
        prop_assert_eq!(
            f.is_r_wise_t_intersecting(spec).unwrap(),
            naive_r_wise(&f, r, t)
        );
    }

    #[test]
    fn upper_shadow_grows_and_absorbs(f in family_strategy()) {
        let n = f.n();
        let k = f.k();
        if k + 1 > n {
            return Ok(());
        }
        let up = f.upper_shadow(k + 1).unwrap();
        // Every shadow member contains some original member, and every
        // original member extends into the shadow unless k = n.
        for s in up.members() {
            prop_assert!(f.members().iter().any(|m| m.is_subset_of(*s)));
        }
        for m in f.members() {
            prop_assert!(up.members().iter().any(|s| m.is_subset_of(*s)));
        }
        // Shadowing in one step of two levels equals two single steps.
        if k + 2 <= n {
            let two = f.upper_shadow(k + 2).unwrap();
            let chained = up.upper_shadow(k + 2).unwrap();
            prop_assert_eq!(two, chained);
        }
    }

    #[test]
    fn pascal_rule(n in 1u64..=40, k in 1i64..=40) {
        prop_assert_eq!(
            binom(n, k),
            binom(n - 1, k - 1) + binom(n - 1, k)
        );
    }

    #[test]
    fn text_round_trip(f in family_strategy()) {
        let back = Family::from_text(&f.to_text()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn measure_is_additive_and_bounded(f in family_strategy(), num in 1i64..=9) {
        let p = BigRational::new(BigInt::from(num), BigInt::from(10));
        let param = MeasureParam::new(p).unwrap();
        let total = mu(&f, &param).unwrap();
        prop_assert!(total > BigRational::new(BigInt::from(0), BigInt::from(1)));
        prop_assert!(total <= BigRational::one());
        // Splitting the member list splits the measure.
        let mid = f.len() / 2;
        if mid > 0 {
            let lo = Family::make(f.n(), f.k(), f.members()[..mid].to_vec()).unwrap();
            let hi = Family::make(f.n(), f.k(), f.members()[mid..].to_vec()).unwrap();
            let sum = mu(&lo, &param).unwrap() + mu(&hi, &param).unwrap();
            prop_assert_eq!(sum, total);
        }
    }

    #[test]
    fn complete_level_measure_is_the_binomial_term(n in 2u32..=9, k in 1u32..=4) {
        let k = k.min(n);
        let f = Family::complete(n, k).unwrap();
        let p = BigRational::new(BigInt::from(1), BigInt::from(3));
        let param = MeasureParam::new(p.clone()).unwrap();
        let q = BigRational::one() - &p;
        let expect = BigRational::from(BigInt::from(binom(n as u64, k as i64)))
            * p.pow(k as i32)
            * q.pow((n - k) as i32);
        prop_assert_eq!(mu(&f, &param).unwrap(), expect);
    }
}
