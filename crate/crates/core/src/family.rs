//! Families of subsets of `[n]` with the intersection predicates, shifting
//! operators, and the upper shadow.
//!
//! A `Family` keeps its members sorted in canonical (numeric mask) order
//! with no duplicates. `k > 0` marks a k-uniform family; `k = 0` admits
//! mixed member sizes.

use crate::subset::{check_n, k_subsets, mask_of_first, KSubset};
use crate::Error;
use std::collections::BTreeSet;
use std::fmt;

/// Intersection requirement: every `r` members (repetition allowed) share
/// at least `t` common points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IntersectionSpec {
    pub r: u32,
    pub t: u32,
}

impl IntersectionSpec {
    pub fn new(r: u32, t: u32) -> Result<Self, Error> {
        if r < 2 || t < 1 {
            return Err(Error::InvalidIntersectionSpec { r, t });
        }
        Ok(IntersectionSpec { r, t })
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Family {
    n: u32,
    k: u32,
    members: Vec<KSubset>,
}

impl Family {
    /// Validates and canonicalizes a member list. Members must fit in
    /// `[n]`, be distinct, and have size `k` when `k > 0`.
    pub fn make(n: u32, k: u32, members: Vec<KSubset>) -> Result<Self, Error> {
        check_n(n)?;
        if k > n {
            return Err(Error::InvalidUniformity { k, n });
        }
        let mut ms = members;
        ms.sort_unstable();
        for w in ms.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateMember { member: w[0].positions() });
            }
        }
        for &m in &ms {
            if !m.fits(n) {
                return Err(Error::MemberOutOfRange { member: m.positions(), n });
            }
            if k > 0 && m.len() != k {
                return Err(Error::NonUniformMember { member: m.positions(), k });
            }
        }
        Ok(Family { n, k, members: ms })
    }

    pub fn empty(n: u32, k: u32) -> Result<Self, Error> {
        Family::make(n, k, Vec::new())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Uniform member size, or 0 for a mixed-size family.
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[KSubset] {
        &self.members
    }

    pub fn contains(&self, s: KSubset) -> bool {
        self.members.binary_search(&s).is_ok()
    }

    /// Intersection of all members. Errors on the empty family, for which
    /// the intersection would be the whole ground set by convention and
    /// every downstream predicate would silently misfire.
    pub fn common_intersection(&self) -> Result<KSubset, Error> {
        if self.members.is_empty() {
            return Err(Error::EmptyFamily);
        }
        let mut acc = u64::MAX;
        for m in &self.members {
            acc &= m.0;
        }
        Ok(KSubset(acc))
    }

    /// True when every `spec.r` members, repetition allowed, intersect in
    /// at least `spec.t` points. With repetition, the binding checks are
    /// the member subsets of size at most `r`; intersections only shrink
    /// as sets are added, so a violating multiset yields a violating
    /// subset of its support and conversely.
    pub fn is_r_wise_t_intersecting(&self, spec: IntersectionSpec) -> Result<bool, Error> {
        if self.members.is_empty() {
            return Err(Error::EmptyFamily);
        }
        let t = spec.t;
        let masks: Vec<u64> = self.members.iter().map(|m| m.0).collect();
        match spec.r {
            0 | 1 => Err(Error::InvalidIntersectionSpec { r: spec.r, t }),
            2 => {
                for (i, &a) in masks.iter().enumerate() {
                    if a.count_ones() < t {
                        return Ok(false);
                    }
                    for &b in &masks[i + 1..] {
                        if (a & b).count_ones() < t {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
            3 => {
                // Pairwise masks drive the triple loop; each pair mask is
                // tested against every later member.
                for (i, &a) in masks.iter().enumerate() {
                    if a.count_ones() < t {
                        return Ok(false);
                    }
                    for (jj, &b) in masks.iter().enumerate().skip(i) {
                        let pair = a & b;
                        if pair.count_ones() < t {
                            return Ok(false);
                        }
                        for &c in &masks[jj..] {
                            if (pair & c).count_ones() < t {
                                return Ok(false);
                            }
                        }
                    }
                }
                Ok(true)
            }
            r => Ok(subsets_intersect_deeply(&masks, r, t)),
        }
    }

    /// Non-trivial for threshold `t`: the members do not all share `t`
    /// common points.
    pub fn is_nontrivial(&self, t: u32) -> Result<bool, Error> {
        Ok(self.common_intersection()?.len() < t)
    }

    /// One (i, j)-shift, `i < j`: each member containing `j` but not `i`
    /// is replaced by the copy with `j` swapped for `i`, unless that copy
    /// is already present in the original family.
    pub fn shift_once(&self, i: u32, j: u32) -> Result<Family, Error> {
        if i < 1 || j > self.n || i >= j {
            return Err(Error::InvalidShiftPair { i, j, n: self.n });
        }
        let bi = 1u64 << (i - 1);
        let bj = 1u64 << (j - 1);
        let mut out: Vec<KSubset> = Vec::with_capacity(self.members.len());
        for &m in &self.members {
            if m.0 & bj != 0 && m.0 & bi == 0 {
                let shifted = KSubset((m.0 & !bj) | bi);
                if self.contains(shifted) {
                    out.push(m);
                } else {
                    out.push(shifted);
                }
            } else {
                out.push(m);
            }
        }
        out.sort_unstable();
        debug_assert!(out.windows(2).all(|w| w[0] != w[1]));
        Ok(Family { n: self.n, k: self.k, members: out })
    }

    /// Repeats lexicographic (i, j) sweeps until a full sweep changes
    /// nothing. Terminates because each productive shift strictly lowers
    /// the sum of all element values over all members.
    pub fn shift_fixpoint(&self) -> Family {
        let mut cur = self.clone();
        loop {
            let mut changed = false;
            for i in 1..self.n {
                for j in i + 1..=self.n {
                    let next = cur.shift_once(i, j).expect("valid pair");
                    if next != cur {
                        debug_assert!(element_sum(&next) < element_sum(&cur));
                        cur = next;
                        changed = true;
                    }
                }
            }
            if !changed {
                return cur;
            }
        }
    }

    /// True when every single (i, j)-shift leaves the family unchanged.
    pub fn is_shifted(&self) -> bool {
        for i in 1..self.n {
            for j in i + 1..=self.n {
                if self.shift_once(i, j).expect("valid pair") != *self {
                    return false;
                }
            }
        }
        true
    }

    /// Upper shadow at level `i`: all i-subsets of `[n]` containing at
    /// least one member.
    pub fn upper_shadow(&self, i: u32) -> Result<Family, Error> {
        if i > self.n || self.members.iter().any(|m| m.len() > i) {
            return Err(Error::InvalidShadowLevel { i, n: self.n });
        }
        let full = mask_of_first(self.n);
        let mut out: BTreeSet<u64> = BTreeSet::new();
        for &m in &self.members {
            let extra = i - m.len();
            for add in crate::subset::subsets_of_mask(full & !m.0, extra) {
                out.insert(m.0 | add);
            }
        }
        Ok(Family {
            n: self.n,
            k: i,
            members: out.into_iter().map(KSubset).collect(),
        })
    }

    /// Text form: header `n k m`, then one member per line as 1-based
    /// increasing positions. Canonical families round-trip byte-exactly.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.n, self.k, self.members.len());
        for m in &self.members {
            let pos: Vec<String> = m.positions().iter().map(|p| p.to_string()).collect();
            s.push_str(&pos.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Family, Error> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
        let head: Vec<&str> = header.split_whitespace().collect();
        if head.len() != 3 {
            return Err(Error::Parse(format!("bad header {header:?}, want `n k m`")));
        }
        let n: u32 = head[0].parse().map_err(|_| Error::Parse(format!("bad n {:?}", head[0])))?;
        let k: u32 = head[1].parse().map_err(|_| Error::Parse(format!("bad k {:?}", head[1])))?;
        let m: usize = head[2].parse().map_err(|_| Error::Parse(format!("bad m {:?}", head[2])))?;
        let mut members = Vec::with_capacity(m);
        for _ in 0..m {
            let line = lines.next().ok_or_else(|| Error::Parse("truncated member list".into()))?;
            let mut positions = Vec::new();
            let mut prev = 0u32;
            for tok in line.split_whitespace() {
                let p: u32 = tok.parse().map_err(|_| Error::Parse(format!("bad position {tok:?}")))?;
                if p <= prev {
                    return Err(Error::Parse(format!("positions not increasing in {line:?}")));
                }
                prev = p;
                positions.push(p);
            }
            members.push(KSubset::from_positions(&positions, n)?);
        }
        if let Some(extra) = lines.find(|l| !l.trim().is_empty()) {
            return Err(Error::Parse(format!("trailing content {extra:?}")));
        }
        Family::make(n, k, members)
    }

    /// Enumerates all of `C([n], k)` as a family.
    pub fn complete(n: u32, k: u32) -> Result<Family, Error> {
        check_n(n)?;
        if k > n {
            return Err(Error::InvalidUniformity { k, n });
        }
        Ok(Family {
            n,
            k,
            members: k_subsets(n, k).collect(),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn element_sum(f: &Family) -> u64 {
    f.members
        .iter()
        .map(|m| m.positions().iter().map(|&p| p as u64).sum::<u64>())
        .sum()
}

/// Depth-first walk over increasing member-index tuples up to depth `r`,
/// failing as soon as any prefix intersection drops below `t`. A prefix
/// below `t` is itself a violating multiset, so early exit is exact.
fn subsets_intersect_deeply(masks: &[u64], r: u32, t: u32) -> bool {
    fn rec(masks: &[u64], start: usize, acc: u64, depth: u32, r: u32, t: u32) -> bool {
        if acc.count_ones() < t {
            return false;
        }
        if depth == r {
            return true;
        }
        for (i, &m) in masks.iter().enumerate().skip(start) {
            if !rec(masks, i + 1, acc & m, depth + 1, r, t) {
                return false;
            }
        }
        true
    }
    masks
        .iter()
        .enumerate()
        .all(|(i, &m)| rec(masks, i + 1, m, 1, r, t))
}
