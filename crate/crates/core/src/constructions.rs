//! The extremal families, generated explicitly.
//!
//! * `gen_a`: members contain {1, 2} and meet [3, k+1], plus the two sets
//!   [k+1] minus one of {1, 2}.
//! * `gen_b`: members meet [4] in at least 3 points.
//! * `gen_bi`: members meet [2 + 2i] in at least 2 + i points (the 2-wise
//!   2-intersecting ladder; i = 1 reproduces `gen_b`).
//! * `gen_c`: for k = 2l, members contain 1 and meet [2, 2l] in at least
//!   l points, plus all sets [2, 2l] with one extra point; for k = 2l+1,
//!   members contain 1 and meet [2, 2l+2] in at least l+1 points, plus
//!   the set [2, 2l+2].
//! * `gen_b_measure`: the mixed-size analogue of `gen_b` over all of
//!   2^[n], used by the product-measure module.
//!
//! Generators enumerate head patterns inside the defining window times
//! tail choices outside it, so cost scales with the output, not with
//! all of C([n], k).

use crate::subset::{mask_of_first, mask_of_range, subsets_of_mask, KSubset};
use crate::{Error, Family};
use std::fmt;

/// Labels for the constructions, used by counting and classification
/// reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConstructionId {
    A,
    B,
    Bi(u32),
    C,
    BMeasure,
}

impl fmt::Display for ConstructionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructionId::A => write!(f, "A"),
            ConstructionId::B => write!(f, "B"),
            ConstructionId::Bi(i) => write!(f, "B{i}"),
            ConstructionId::C => write!(f, "C"),
            ConstructionId::BMeasure => write!(f, "Bmeasure"),
        }
    }
}

fn check_nk(n: u32, k: u32, k_min: u32) -> Result<(), Error> {
    crate::subset::check_n(n)?;
    if k < k_min || k >= n {
        return Err(Error::InvalidParam(format!(
            "need {k_min} <= k < n <= 64, got n={n} k={k}"
        )));
    }
    Ok(())
}

/// Cross product of head patterns and tail patterns, OR-ed together.
fn head_tail(heads: &[u64], tails: &[u64], out: &mut Vec<KSubset>) {
    for &h in heads {
        for &t in tails {
            out.push(KSubset(h | t));
        }
    }
}

/// Two fixed points plus a forced hit in the next k - 1 positions, with
/// the two boundary sets adjoined. Defined for k >= 3; at k = 3 it
/// degenerates to all 3-subsets of [4].
pub fn gen_a(n: u32, k: u32) -> Result<Family, Error> {
    check_nk(n, k, 3)?;
    let window = mask_of_range(3, k + 1); // k - 1 positions
    let tail = mask_of_range(k + 2, n.min(64));
    let base = 0b11u64; // {1, 2}
    let mut members = Vec::new();
    for j in 1..=(k - 2).min(k - 1) {
        let heads = subsets_of_mask(window, j);
        let tails = subsets_of_mask(tail, k - 2 - j);
        let mut combined = Vec::new();
        head_tail(&heads, &tails, &mut combined);
        members.extend(combined.into_iter().map(|s| KSubset(s.0 | base)));
    }
    // [k+1] \ {1} and [k+1] \ {2}
    let full_k1 = mask_of_first(k + 1);
    members.push(KSubset(full_k1 & !1));
    members.push(KSubset(full_k1 & !2));
    Family::make(n, k, members)
}

/// Members meeting [4] in at least 3 points.
pub fn gen_b(n: u32, k: u32) -> Result<Family, Error> {
    gen_bi(n, k, 1)
}

/// Members meeting [2 + 2i] in at least 2 + i points.
pub fn gen_bi(n: u32, k: u32, i: u32) -> Result<Family, Error> {
    check_nk(n, k, 3)?;
    if i < 1 || 2 + 2 * i > n || k < 2 + i {
        return Err(Error::InvalidParam(format!(
            "need i >= 1, 2+2i <= n, k >= 2+i, got n={n} k={k} i={i}"
        )));
    }
    let w = 2 + 2 * i;
    let window = mask_of_first(w);
    let tail = mask_of_range(w + 1, n);
    let mut members = Vec::new();
    for m in (2 + i)..=w.min(k) {
        if k - m > n - w {
            continue;
        }
        let heads = subsets_of_mask(window, m);
        let tails = subsets_of_mask(tail, k - m);
        head_tail(&heads, &tails, &mut members);
    }
    Family::make(n, k, members)
}

/// One fixed point plus a majority of a short window, with the boundary
/// sets adjoined; the window parity follows k. Defined for k >= 3; at
/// k = 3 the odd case reproduces all 3-subsets of [4].
pub fn gen_c(n: u32, k: u32) -> Result<Family, Error> {
    check_nk(n, k, 3)?;
    let mut members = Vec::new();
    if k % 2 == 0 {
        let l = k / 2;
        // {1} + at least l of [2, 2l] + rest above 2l
        let window = mask_of_range(2, 2 * l);
        let tail = mask_of_range(2 * l + 1, n);
        for j in l..=(2 * l - 1).min(k - 1) {
            if k - 1 - j > n - 2 * l {
                continue;
            }
            let heads = subsets_of_mask(window, j);
            let tails = subsets_of_mask(tail, k - 1 - j);
            let mut combined = Vec::new();
            head_tail(&heads, &tails, &mut combined);
            members.extend(combined.into_iter().map(|s| KSubset(s.0 | 1)));
        }
        // [2, 2l] + one point above
        for x in 2 * l + 1..=n {
            members.push(KSubset(window | (1u64 << (x - 1))));
        }
    } else {
        let l = (k - 1) / 2;
        if n < 2 * l + 2 {
            return Err(Error::InvalidParam(format!(
                "need n >= k + 1 = {}, got n={n}",
                2 * l + 2
            )));
        }
        let window = mask_of_range(2, 2 * l + 2);
        let tail = mask_of_range(2 * l + 3, n);
        for j in (l + 1)..=(2 * l + 1).min(k - 1) {
            if k - 1 - j > n.saturating_sub(2 * l + 2) {
                continue;
            }
            let heads = subsets_of_mask(window, j);
            let tails = subsets_of_mask(tail, k - 1 - j);
            let mut combined = Vec::new();
            head_tail(&heads, &tails, &mut combined);
            members.extend(combined.into_iter().map(|s| KSubset(s.0 | 1)));
        }
        members.push(KSubset(window));
    }
    Family::make(n, k, members)
}

/// All subsets of [n] (any size) meeting [4] in at least 3 points.
/// Kept deliberately small: the member list has 5 * 2^(n-4) entries.
pub fn gen_b_measure(n: u32) -> Result<Family, Error> {
    if !(4..=20).contains(&n) {
        return Err(Error::InvalidParam(format!(
            "need 4 <= n <= 20, got n={n}"
        )));
    }
    let window = mask_of_first(4);
    let tail = mask_of_range(5, n);
    let mut members = Vec::new();
    for m in 3..=4u32 {
        let heads = subsets_of_mask(window, m);
        for size in 0..=(n - 4) {
            let tails = subsets_of_mask(tail, size);
            head_tail(&heads, &tails, &mut members);
        }
    }
    Family::make(n, 0, members)
}

pub fn generate(id: ConstructionId, n: u32, k: u32) -> Result<Family, Error> {
    match id {
        ConstructionId::A => gen_a(n, k),
        ConstructionId::B => gen_b(n, k),
        ConstructionId::Bi(i) => gen_bi(n, k, i),
        ConstructionId::C => gen_c(n, k),
        ConstructionId::BMeasure => gen_b_measure(n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::IntersectionSpec;
    use crate::subset::k_subsets;

    /// Oracle: filter all of C([n], k) by the defining predicate.
    fn filter_family(n: u32, k: u32, pred: impl Fn(u64) -> bool) -> Vec<u64> {
        k_subsets(n, k).map(|s| s.0).filter(|&m| pred(m)).collect()
    }

    #[test]
    fn gen_a_matches_filter_oracle() {
        for (n, k) in [(12, 4), (8, 4), (7, 3), (10, 5), (6, 5)] {
            let window = mask_of_range(3, k + 1);
            let full_k1 = mask_of_first(k + 1);
            let specials = [full_k1 & !1u64, full_k1 & !2u64];
            let expect = filter_family(n, k, |m| {
                (m & 0b11 == 0b11 && m & window != 0) || specials.contains(&m)
            });
            let got: Vec<u64> = gen_a(n, k).unwrap().members().iter().map(|s| s.0).collect();
            assert_eq!(got, expect, "gen_a({n},{k})");
        }
    }

    #[test]
    fn gen_a_frozen_values() {
        assert_eq!(gen_a(12, 4).unwrap().len(), 26);
        // k = 3 degenerates to all 3-subsets of [4] for any n >= 5.
        let a3 = gen_a(9, 3).unwrap();
        assert_eq!(a3.len(), 4);
        assert!(a3.members().iter().all(|m| m.fits(4)));
    }

    #[test]
    fn gen_b_matches_filter_oracle_and_values() {
        for (n, k) in [(7, 4), (6, 3), (8, 4), (10, 5), (12, 5)] {
            let expect = filter_family(n, k, |m| (m & 0b1111).count_ones() >= 3);
            let got: Vec<u64> = gen_b(n, k).unwrap().members().iter().map(|s| s.0).collect();
            assert_eq!(got, expect, "gen_b({n},{k})");
        }
        assert_eq!(gen_b(7, 4).unwrap().len(), 13);
        assert_eq!(gen_b(6, 3).unwrap().len(), 4);
    }

    #[test]
    fn gen_bi_matches_filter_oracle() {
        for (n, k, i) in [(10, 5, 2), (8, 4, 1), (10, 5, 3), (12, 6, 2)] {
            let w = mask_of_first(2 + 2 * i);
            let need = 2 + i;
            let expect = filter_family(n, k, |m| (m & w).count_ones() >= need);
            let got: Vec<u64> = gen_bi(n, k, i)
                .unwrap()
                .members()
                .iter()
                .map(|s| s.0)
                .collect();
            assert_eq!(got, expect, "gen_bi({n},{k},{i})");
        }
        assert_eq!(gen_bi(10, 5, 2).unwrap().len(), 66);
        assert!(gen_bi(10, 5, 0).is_err());
        assert!(gen_bi(10, 3, 2).is_err()); // k < 2 + i
        assert!(gen_bi(5, 4, 2).is_err()); // 2 + 2i > n
    }

    #[test]
    fn gen_c_matches_filter_oracle() {
        // even k
        for (n, k) in [(10, 4), (9, 6), (12, 4)] {
            let l = k / 2;
            let window = mask_of_range(2, 2 * l);
            let expect = filter_family(n, k, |m| {
                (m & 1 != 0 && (m & window).count_ones() >= l)
                    || (m & window == window && m & 1 == 0 && (m & !window).count_ones() == 1)
            });
            let got: Vec<u64> = gen_c(n, k).unwrap().members().iter().map(|s| s.0).collect();
            assert_eq!(got, expect, "gen_c({n},{k})");
        }
        // odd k
        for (n, k) in [(12, 5), (9, 3), (11, 7)] {
            let l = (k - 1) / 2;
            let window = mask_of_range(2, 2 * l + 2);
            let expect = filter_family(n, k, |m| {
                (m & 1 != 0 && (m & window).count_ones() >= l + 1) || m == window
            });
            let got: Vec<u64> = gen_c(n, k).unwrap().members().iter().map(|s| s.0).collect();
            assert_eq!(got, expect, "gen_c({n},{k})");
        }
    }

    #[test]
    fn gen_c_frozen_values() {
        assert_eq!(gen_c(10, 4).unwrap().len(), 25);
        assert_eq!(gen_c(12, 5).unwrap().len(), 66);
        // k = 3 via the odd case: all 3-subsets of [4].
        let c3 = gen_c(9, 3).unwrap();
        assert_eq!(c3.len(), 4);
        assert!(c3.members().iter().all(|m| m.fits(4)));
        assert_eq!(c3, gen_a(9, 3).unwrap());
        assert_eq!(c3, gen_b(9, 3).unwrap());
    }

    #[test]
    fn gen_b_measure_values() {
        let f4 = gen_b_measure(4).unwrap();
        assert_eq!(f4.len(), 5);
        assert_eq!(f4.k(), 0);
        assert_eq!(gen_b_measure(5).unwrap().len(), 10);
        assert_eq!(gen_b_measure(8).unwrap().len(), 5 * 16);
        assert!(gen_b_measure(3).is_err());
        assert!(gen_b_measure(21).is_err());
    }

    #[test]
    fn constructions_are_nontrivial_3_wise_intersecting() {
        let spec3 = IntersectionSpec::new(3, 1).unwrap();
        for f in [
            gen_a(12, 5).unwrap(),
            gen_b(12, 5).unwrap(),
            gen_c(12, 5).unwrap(),
            gen_a(10, 4).unwrap(),
            gen_c(10, 4).unwrap(),
            gen_b(8, 4).unwrap(),
        ] {
            assert!(f.is_r_wise_t_intersecting(spec3).unwrap(), "{f:?}");
            assert!(f.is_nontrivial(1).unwrap(), "{f:?}");
        }
        // The ladder is 2-wise 2-intersecting and non-trivial for t = 2.
        let spec22 = IntersectionSpec::new(2, 2).unwrap();
        for i in 1..=3 {
            let f = gen_bi(10, 5, i).unwrap();
            assert!(f.is_r_wise_t_intersecting(spec22).unwrap());
            assert!(f.is_nontrivial(2).unwrap());
        }
    }

    #[test]
    fn constructions_are_shift_fixed() {
        // Every extremal candidate here is already shifted: moving any
        // element down either stays inside the defining window or
        // lands on the other boundary set.
        assert!(gen_b(8, 4).unwrap().is_shifted());
        assert!(gen_bi(10, 5, 2).unwrap().is_shifted());
        assert!(gen_a(8, 4).unwrap().is_shifted());
        assert!(gen_a(12, 5).unwrap().is_shifted());
        assert!(gen_c(10, 4).unwrap().is_shifted());
        assert!(gen_c(12, 5).unwrap().is_shifted());
        // Compression is therefore the identity on them.
        let a = gen_a(8, 4).unwrap();
        assert_eq!(a.shift_fixpoint().to_text(), a.to_text());
    }

    #[test]
    fn common_intersection_of_gen_a_is_empty() {
        let a = gen_a(12, 5).unwrap();
        assert!(a.common_intersection().unwrap().is_empty());
    }
}
