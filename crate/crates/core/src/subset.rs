//! Subsets of a ground set `[n] = {1, ..., n}` packed into machine words.
//!
//! A subset is stored as a `u64` bitmask with position `p` mapped to bit
//! `p - 1`, so position 1 is the least-significant bit. The canonical order
//! on subsets is the numeric order of the mask values; all enumeration in
//! this crate follows it.

use crate::Error;
use std::fmt;

/// Maximum supported ground-set size.
pub const MAX_N: u32 = 64;

/// A subset of `[n]` as a bitmask. The ground-set size is carried by the
/// surrounding context, not the value.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct KSubset(pub u64);

impl KSubset {
    pub const EMPTY: KSubset = KSubset(0);

    /// Builds a subset from 1-based positions. Positions must be within
    /// `[1, n]` and distinct.
    pub fn from_positions(positions: &[u32], n: u32) -> Result<Self, Error> {
        check_n(n)?;
        let mut mask = 0u64;
        for &p in positions {
            if p < 1 || p > n {
                return Err(Error::PositionOutOfRange { position: p, n });
            }
            let bit = 1u64 << (p - 1);
            if mask & bit != 0 {
                return Err(Error::DuplicatePosition { position: p });
            }
            mask |= bit;
        }
        Ok(KSubset(mask))
    }

    /// 1-based positions in increasing order.
    pub fn positions(self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.len() as usize);
        let mut m = self.0;
        while m != 0 {
            let b = m.trailing_zeros();
            out.push(b + 1);
            m &= m - 1;
        }
        out
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, position: u32) -> bool {
        position >= 1 && position <= 64 && self.0 & (1u64 << (position - 1)) != 0
    }

    pub fn intersect(self, other: KSubset) -> KSubset {
        KSubset(self.0 & other.0)
    }

    pub fn union(self, other: KSubset) -> KSubset {
        KSubset(self.0 | other.0)
    }

    pub fn is_subset_of(self, other: KSubset) -> bool {
        self.0 & !other.0 == 0
    }

    /// True when all positions fall within `[1, n]`.
    pub fn fits(self, n: u32) -> bool {
        n <= 64 && self.0 & !mask_of_first(n) == 0
    }
}

impl fmt::Debug for KSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.positions().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

/// Mask of `{1, ..., n}`; `n = 0` gives the empty mask.
pub fn mask_of_first(n: u32) -> u64 {
    debug_assert!(n <= 64);
    if n == 0 {
        0
    } else {
        u64::MAX >> (64 - n)
    }
}

/// Mask of the interval `[lo, hi]` (1-based, inclusive); empty when `lo > hi`.
pub fn mask_of_range(lo: u32, hi: u32) -> u64 {
    debug_assert!(lo >= 1 && hi <= 64);
    if lo > hi {
        0
    } else {
        mask_of_first(hi) & !mask_of_first(lo - 1)
    }
}

pub(crate) fn check_n(n: u32) -> Result<(), Error> {
    if n < 1 || n > MAX_N {
        return Err(Error::InvalidGroundSet { n });
    }
    Ok(())
}

/// Iterates the `k`-subsets of `[n]` in canonical (increasing mask) order
/// via Gosper's hack.
pub fn k_subsets(n: u32, k: u32) -> KSubsetIter {
    debug_assert!(n <= 64 && k <= n);
    KSubsetIter {
        next: if k == 0 { Some(0) } else { Some(mask_of_first(k)) },
        limit: mask_of_first(n),
        k,
    }
}

pub struct KSubsetIter {
    next: Option<u64>,
    limit: u64,
    k: u32,
}

impl Iterator for KSubsetIter {
    type Item = KSubset;

    fn next(&mut self) -> Option<KSubset> {
        let v = self.next?;
        if v & !self.limit != 0 {
            self.next = None;
            return None;
        }
        self.next = if self.k == 0 || v == 0 {
            None
        } else {
            let u = v & v.wrapping_neg();
            let w = v.wrapping_add(u);
            if w == 0 {
                None
            } else {
                Some(w | (((v ^ w) / u) >> 2))
            }
        };
        Some(KSubset(v))
    }
}

/// All `size`-subsets of the set bits of `mask`, in canonical order.
pub fn subsets_of_mask(mask: u64, size: u32) -> Vec<u64> {
    let bits: Vec<u64> = {
        let mut v = Vec::new();
        let mut m = mask;
        while m != 0 {
            v.push(m & m.wrapping_neg());
            m &= m - 1;
        }
        v
    };
    let mut out = Vec::new();
    if size as usize > bits.len() {
        return out;
    }
    // Index-combination walk over the extracted bits; bit lists are short
    // (<= 64) so the recursion-free odometer is enough.
    let s = size as usize;
    if s == 0 {
        out.push(0);
        return out;
    }
    let mut idx: Vec<usize> = (0..s).collect();
    loop {
        out.push(idx.iter().fold(0u64, |acc, &i| acc | bits[i]));
        // advance odometer
        let mut i = s;
        loop {
            if i == 0 {
                out.sort_unstable();
                return out;
            }
            i -= 1;
            if idx[i] != i + bits.len() - s {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..s {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_round_trip() {
        let s = KSubset::from_positions(&[2, 5, 7], 10).unwrap();
        assert_eq!(s.0, 0b101_0010);
        assert_eq!(s.positions(), vec![2, 5, 7]);
        assert_eq!(s.len(), 3);
        assert!(s.contains(5));
        assert!(!s.contains(3));
    }

    #[test]
    fn rejects_bad_positions() {
        assert!(KSubset::from_positions(&[0], 5).is_err());
        assert!(KSubset::from_positions(&[6], 5).is_err());
        assert!(KSubset::from_positions(&[2, 2], 5).is_err());
        assert!(KSubset::from_positions(&[1], 0).is_err());
        assert!(KSubset::from_positions(&[1], 65).is_err());
    }

    #[test]
    fn range_masks() {
        assert_eq!(mask_of_first(0), 0);
        assert_eq!(mask_of_first(3), 0b111);
        assert_eq!(mask_of_first(64), u64::MAX);
        assert_eq!(mask_of_range(3, 5), 0b1_1100);
        assert_eq!(mask_of_range(4, 3), 0);
        assert_eq!(mask_of_range(1, 64), u64::MAX);
    }

    #[test]
    fn enumeration_is_canonical_and_complete() {
        let all: Vec<u64> = k_subsets(6, 3).map(|s| s.0).collect();
        assert_eq!(all.len(), 20); // C(6,3)
        let mut sorted = all.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(all, sorted);
        assert_eq!(all[0], 0b111);
        assert_eq!(*all.last().unwrap(), 0b11_1000);
    }

    #[test]
    fn enumeration_edges() {
        assert_eq!(k_subsets(5, 0).count(), 1);
        assert_eq!(k_subsets(5, 5).count(), 1);
        assert_eq!(k_subsets(64, 1).count(), 64);
        assert_eq!(k_subsets(64, 63).count(), 64);
        assert_eq!(k_subsets(1, 1).map(|s| s.0).collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn mask_subset_enumeration() {
        // 2-subsets of {2,4,5} (mask 0b11010)
        let subs = subsets_of_mask(0b11010, 2);
        assert_eq!(subs, vec![0b01010, 0b10010, 0b11000]);
        assert_eq!(subsets_of_mask(0b11010, 0), vec![0]);
        assert_eq!(subsets_of_mask(0b11010, 4), Vec::<u64>::new());
        assert_eq!(subsets_of_mask(0, 0), vec![0]);
    }
}
