//! Exhaustive branch-and-bound maximization of r-wise t-intersecting
//! families on small ground sets.
//!
//! The search is the ground-truth oracle for every small exact value:
//! it enumerates k-subset candidates in numeric mask order and grows a
//! family depth-first, so results (value and canonical witness list)
//! are fully deterministic. Feasibility is incremental: the pool passed
//! down a branch already satisfies every intersection constraint, and
//! adding a member only re-checks the pool against the masks that
//! member creates.

use crate::counting::{classify_m3, ClassifyRecord};
use crate::family::{Family, IntersectionSpec};
use crate::subset::{k_subsets, mask_of_first, KSubset};
use crate::Error;
use num_traits::ToPrimitive;
use std::fmt;
use std::time::{Duration, Instant};

/// Resource caps. Exceeding any cap ends the run with an INCOMPLETE
/// status and the best bound found so far, never a silent wrong answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Refuse to start when binom(n, k) exceeds this.
    pub max_candidates: u64,
    /// Cap on visited search states.
    pub node_limit: u64,
    /// Wall-clock cap, checked every 1024 nodes.
    pub time_limit: Option<Duration>,
    /// Maximum families retained at the optimum; 0 keeps just the value
    /// (and prunes harder).
    pub max_witnesses: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_candidates: 70,
            node_limit: 100_000_000,
            time_limit: None,
            max_witnesses: 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchStatus {
    /// The value is the true maximum for the stated problem.
    Exact,
    /// The value is attained but may not be maximal for the
    /// unrestricted problem (shifted-only search reports this).
    LowerBound,
    /// A budget cap ended the run early; the value is only a bound.
    Incomplete,
}

impl fmt::Display for SearchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SearchStatus::Exact => "EXACT",
            SearchStatus::LowerBound => "LOWER_BOUND",
            SearchStatus::Incomplete => "INCOMPLETE",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub status: SearchStatus,
    pub value: u64,
    /// Maximum families in canonical (discovery) order, capped by the
    /// budget; empty when value is 0.
    pub witnesses: Vec<Family>,
    /// Search states visited.
    pub nodes: u64,
}

struct Engine<'a> {
    n: u32,
    k: u32,
    r: u32,
    t: u32,
    nontrivial: bool,
    shifted: bool,
    cands: Vec<u64>,
    budget: &'a SearchBudget,
    started: Instant,
    nodes: u64,
    truncated: bool,
    best: usize,
    best_members: Vec<Vec<u64>>,
    chosen: Vec<u64>,
    chosen_flags: Vec<bool>,
    /// common[d] = AND of the first d chosen members (common[0] = [n]).
    common: Vec<u64>,
    /// levels[d] = intersections of every d-subset of chosen, kept for
    /// 1 <= d <= r-2: the source of the new top-level masks on insert.
    levels: Vec<Vec<u64>>,
    level_marks: Vec<Vec<usize>>,
}

impl<'a> Engine<'a> {
    fn new(
        n: u32,
        k: u32,
        spec: IntersectionSpec,
        nontrivial: bool,
        shifted: bool,
        budget: &'a SearchBudget,
    ) -> Result<Self, Error> {
        crate::subset::check_n(n)?;
        if k == 0 || k > n {
            return Err(Error::InvalidUniformity { k, n });
        }
        let cands: Vec<u64> = k_subsets(n, k).map(|s| s.0).collect();
        Ok(Engine {
            n,
            k,
            r: spec.r,
            t: spec.t,
            nontrivial,
            shifted,
            chosen_flags: vec![false; cands.len()],
            cands,
            budget,
            started: Instant::now(),
            nodes: 0,
            truncated: false,
            best: 0,
            best_members: Vec::new(),
            chosen: Vec::new(),
            common: vec![mask_of_first(n)],
            levels: vec![Vec::new(); spec.r.saturating_sub(2) as usize],
            level_marks: Vec::new(),
        })
    }

    fn over_budget(&mut self) -> bool {
        if self.truncated {
            return true;
        }
        if self.nodes >= self.budget.node_limit {
            self.truncated = true;
            return true;
        }
        if self.nodes % 1024 == 0 {
            if let Some(limit) = self.budget.time_limit {
                if self.started.elapsed() > limit {
                    self.truncated = true;
                    return true;
                }
            }
        }
        false
    }

    /// Masks every pool member must meet after `c` joins a family of
    /// the current size: one new mask per (top-1)-subset paired with c.
    /// Lower-level constraints are implied by monotonicity.
    fn new_masks(&self, c: u64) -> Vec<u64> {
        let size = self.chosen.len();
        if size + 1 < self.r as usize {
            vec![*self.common.last().expect("seeded") & c]
        } else if self.r == 2 {
            vec![c]
        } else {
            // I_{r-2} is the deepest stored level: levels[r-3].
            self.levels[(self.r - 3) as usize]
                .iter()
                .map(|m| m & c)
                .collect()
        }
    }

    fn push(&mut self, idx: usize) {
        let c = self.cands[idx];
        // Grow intersection levels top-down so each stage reads the
        // previous depth's pre-insert contents.
        let mut marks = Vec::with_capacity(self.levels.len());
        for lv in &self.levels {
            marks.push(lv.len());
        }
        for d in (1..self.levels.len()).rev() {
            let (lower, upper) = self.levels.split_at_mut(d);
            let src = &lower[d - 1][..marks[d - 1]];
            upper[0].extend(src.iter().map(|m| m & c));
        }
        if !self.levels.is_empty() {
            self.levels[0].push(c);
        }
        self.level_marks.push(marks);
        self.common.push(self.common.last().expect("seeded") & c);
        self.chosen.push(c);
        self.chosen_flags[idx] = true;
    }

    fn pop(&mut self, idx: usize) {
        self.chosen_flags[idx] = false;
        self.chosen.pop();
        self.common.pop();
        let marks = self.level_marks.pop().expect("balanced");
        for (lv, m) in self.levels.iter_mut().zip(marks) {
            lv.truncate(m);
        }
    }

    fn shift_images_chosen(&self, c: u64) -> bool {
        let full = mask_of_first(self.n);
        let mut j_bits = c;
        while j_bits != 0 {
            let j = j_bits.trailing_zeros();
            j_bits &= j_bits - 1;
            let mut i_bits = !c & full & ((1u64 << j) - 1);
            while i_bits != 0 {
                let i = i_bits.trailing_zeros();
                i_bits &= i_bits - 1;
                let img = (c & !(1u64 << j)) | (1u64 << i);
                match self.cands.binary_search(&img) {
                    Ok(pos) if self.chosen_flags[pos] => {}
                    _ => return false,
                }
            }
        }
        true
    }

    fn record_if_valid(&mut self) {
        let size = self.chosen.len();
        if size == 0 {
            return;
        }
        if self.nontrivial && (self.common.last().unwrap().count_ones() >= self.t) {
            return;
        }
        if size > self.best {
            self.best = size;
            self.best_members.clear();
            if self.budget.max_witnesses > 0 {
                self.best_members.push(self.chosen.clone());
            }
        } else if size == self.best && self.best_members.len() < self.budget.max_witnesses {
            self.best_members.push(self.chosen.clone());
        }
    }

    fn dfs(&mut self, pool: &[usize]) {
        self.nodes += 1;
        if self.over_budget() {
            return;
        }
        self.record_if_valid();
        let potential = self.chosen.len() + pool.len();
        if potential < self.best
            || (potential == self.best && self.best_members.len() >= self.budget.max_witnesses)
        {
            return;
        }
        if self.nontrivial {
            // Every completion's overall intersection contains
            // common(chosen) AND-ed with the whole pool; if that core
            // already has t points, no completion is non-trivial.
            let floor = pool
                .iter()
                .fold(*self.common.last().unwrap(), |a, &i| a & self.cands[i]);
            if floor.count_ones() >= self.t {
                return;
            }
        }
        for (pos, &idx) in pool.iter().enumerate() {
            if self.truncated {
                return;
            }
            if self.shifted && !self.shift_images_chosen(self.cands[idx]) {
                continue;
            }
            let masks = self.new_masks(self.cands[idx]);
            let child: Vec<usize> = pool[pos + 1..]
                .iter()
                .copied()
                .filter(|&j| {
                    let p = self.cands[j];
                    masks.iter().all(|m| (m & p).count_ones() >= self.t)
                })
                .collect();
            self.push(idx);
            self.dfs(&child);
            self.pop(idx);
        }
    }

    fn run(mut self) -> Result<SearchResult, Error> {
        // A lone member already needs t points of self-intersection.
        let root: Vec<usize> = if self.k >= self.t {
            (0..self.cands.len()).collect()
        } else {
            Vec::new()
        };
        self.dfs(&root);
        let mut witnesses = Vec::with_capacity(self.best_members.len());
        for members in &self.best_members {
            let fam = Family::make(self.n, self.k, members.iter().map(|&m| KSubset(m)).collect())?;
            debug_assert!(fam
                .is_r_wise_t_intersecting(IntersectionSpec::new(self.r, self.t)?)
                .unwrap_or(false));
            witnesses.push(fam);
        }
        let status = if self.truncated {
            SearchStatus::Incomplete
        } else if self.shifted {
            SearchStatus::LowerBound
        } else {
            SearchStatus::Exact
        };
        Ok(SearchResult {
            status,
            value: self.best as u64,
            witnesses,
            nodes: self.nodes,
        })
    }
}

fn candidate_count(n: u32, k: u32) -> u64 {
    crate::counting::binom(n as u64, k as i64)
        .to_u64()
        .unwrap_or(u64::MAX)
}

/// Maximum size of a k-uniform family on [n] that is r-wise t-wise
/// intersecting per `spec`, optionally restricted to non-trivial
/// families (overall intersection below t points). Exhaustive within
/// budget; the flagship stretch instance is (n, k) = (8, 4) at the
/// default 70-candidate cap.
pub fn max_family(
    n: u32,
    k: u32,
    spec: IntersectionSpec,
    nontrivial: bool,
    budget: &SearchBudget,
) -> Result<SearchResult, Error> {
    if candidate_count(n, k) > budget.max_candidates {
        return Ok(SearchResult {
            status: SearchStatus::Incomplete,
            value: 0,
            witnesses: Vec::new(),
            nodes: 0,
        });
    }
    Engine::new(n, k, spec, nontrivial, false, budget)?.run()
}

/// Maximum over shifted (compression-fixed) non-trivial families only.
/// Always reported as LOWER_BOUND for the unrestricted problem:
/// shifting preserves the intersection property but can trade a
/// non-trivial family for a trivial one, so the shifted optimum may sit
/// strictly below the true one.
pub fn shifted_lower_bound(
    n: u32,
    k: u32,
    spec: IntersectionSpec,
    budget: &SearchBudget,
) -> Result<SearchResult, Error> {
    if candidate_count(n, k) > budget.max_candidates {
        return Ok(SearchResult {
            status: SearchStatus::Incomplete,
            value: 0,
            witnesses: Vec::new(),
            nodes: 0,
        });
    }
    Engine::new(n, k, spec, true, true, budget)?.run()
}

/// One grid point of the search-versus-classification cross-check.
#[derive(Clone, Debug)]
pub struct ClaimRow {
    pub n: u32,
    pub k: u32,
    pub search_status: SearchStatus,
    pub search_value: u64,
    pub classify: ClassifyRecord,
    /// Some(flag) when both sides produced an exact value; None when
    /// the classification leaves the point open (the search value is
    /// then new data) or the search was incomplete.
    pub agreement: Option<bool>,
}

#[derive(Clone, Debug, Default)]
pub struct ClaimsReport {
    pub rows: Vec<ClaimRow>,
}

impl ClaimsReport {
    /// No row where both sides are exact and disagree.
    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(|r| r.agreement != Some(false))
    }
}

/// The desk-scale grid: every k = 3 row the classification pins at 4,
/// plus the k = 4 corners around the small-k threshold.
pub fn default_claims_grid() -> Vec<(u32, u32)> {
    vec![
        (4, 3),
        (5, 3),
        (6, 3),
        (7, 3),
        (8, 3),
        (5, 4),
        (6, 4),
        (7, 4),
        (8, 4),
    ]
}

/// Runs the non-trivial 3-wise search on each grid point and compares
/// with the closed-form classification.
pub fn verify_claims(grid: &[(u32, u32)], budget: &SearchBudget) -> Result<ClaimsReport, Error> {
    let spec = IntersectionSpec::new(3, 1)?;
    let mut report = ClaimsReport::default();
    for &(n, k) in grid {
        let sr = max_family(n, k, spec, true, budget)?;
        let classify = classify_m3(n, k)?;
        let agreement = match (&sr.status, &classify.value) {
            (SearchStatus::Exact, Some(v)) => {
                Some(v.to_u64().map(|cv| cv == sr.value).unwrap_or(false))
            }
            _ => None,
        };
        report.rows.push(ClaimRow {
            n,
            k,
            search_status: sr.status,
            search_value: sr.value,
            classify,
            agreement,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::Regime;

    fn spec(r: u32, t: u32) -> IntersectionSpec {
        IntersectionSpec::new(r, t).unwrap()
    }

    fn run(n: u32, k: u32, r: u32, t: u32, nontrivial: bool) -> SearchResult {
        max_family(n, k, spec(r, t), nontrivial, &SearchBudget::default()).unwrap()
    }

    #[test]
    fn three_wise_nontrivial_small_frozen() {
        for n in 4..=7 {
            let res = run(n, 3, 3, 1, true);
            assert_eq!(res.status, SearchStatus::Exact, "n={n}");
            assert_eq!(res.value, 4, "n={n}");
        }
        assert_eq!(run(5, 4, 3, 1, true).value, 5);
        assert_eq!(run(6, 4, 3, 1, true).value, 9);
        assert_eq!(run(7, 4, 3, 1, true).value, 13);
    }

    #[test]
    fn witnesses_verify_independently() {
        let res = run(6, 4, 3, 1, true);
        assert_eq!(res.value, 9);
        assert!(!res.witnesses.is_empty());
        for w in &res.witnesses {
            assert_eq!(w.len() as u64, res.value);
            assert!(w.is_r_wise_t_intersecting(spec(3, 1)).unwrap());
            assert!(w.is_nontrivial(1).unwrap());
        }
    }

    #[test]
    fn unconstrained_three_wise_is_the_star_bound() {
        // At k/n <= 2/3 the trivial star is optimal: binom(n-1, k-1).
        let res = run(6, 3, 3, 1, false);
        assert_eq!(res.value, 10);
        let star = &res.witnesses[0];
        assert!(!star.common_intersection().unwrap().is_empty());

        assert_eq!(run(5, 3, 3, 1, false).value, 6);
        assert_eq!(run(6, 4, 3, 1, false).value, 10);
    }

    #[test]
    fn pairwise_relaxation_dominates() {
        for (n, k) in [(5, 3), (6, 3), (6, 4)] {
            let two = run(n, k, 2, 1, true).value;
            let three = run(n, k, 3, 1, true).value;
            assert!(two >= three, "({n},{k}): {two} < {three}");
            let unconstrained = run(n, k, 3, 1, false).value;
            assert!(unconstrained >= three, "({n},{k})");
        }
    }

    #[test]
    fn two_wise_two_intersecting_frozen() {
        let res = run(6, 4, 2, 2, true);
        assert_eq!(res.value, 15); // the complete family qualifies
        assert_eq!(res.status, SearchStatus::Exact);
    }

    #[test]
    fn impossible_t_gives_zero() {
        let res = run(5, 3, 3, 5, true);
        assert_eq!(res.value, 0);
        assert_eq!(res.status, SearchStatus::Exact);
        assert!(res.witnesses.is_empty());
    }

    #[test]
    fn candidate_cap_yields_incomplete() {
        let res = max_family(10, 5, spec(3, 1), true, &SearchBudget::default()).unwrap();
        assert_eq!(res.status, SearchStatus::Incomplete);
        assert_eq!(res.value, 0);
        assert_eq!(res.nodes, 0);
    }

    #[test]
    fn node_limit_yields_incomplete_bound() {
        let tight = SearchBudget {
            node_limit: 40,
            ..SearchBudget::default()
        };
        let res = max_family(6, 3, spec(3, 1), false, &tight).unwrap();
        assert_eq!(res.status, SearchStatus::Incomplete);
        assert!(res.value <= 10);
        // Whatever was found is still a genuine family.
        for w in &res.witnesses {
            assert!(w.is_r_wise_t_intersecting(spec(3, 1)).unwrap());
        }
    }

    #[test]
    fn shifted_restriction_frozen_values() {
        let cases = [
            (5, 2, 3, 1, 0u64),
            (6, 3, 3, 1, 4),
            (5, 3, 3, 1, 4),
            (6, 4, 3, 1, 9),
            (6, 2, 2, 1, 3),
            (5, 2, 2, 1, 3),
        ];
        for (n, k, r, t, want) in cases {
            let res = shifted_lower_bound(n, k, spec(r, t), &SearchBudget::default()).unwrap();
            assert_eq!(res.value, want, "({n},{k},({r},{t}))");
            assert_eq!(res.status, SearchStatus::LowerBound);
            for w in &res.witnesses {
                assert!(w.is_shifted(), "({n},{k})");
                assert!(w.is_nontrivial(t).unwrap());
            }
        }
    }

    #[test]
    fn shifted_never_exceeds_unrestricted() {
        for (n, k) in [(5, 3), (6, 3), (6, 4)] {
            let s = shifted_lower_bound(n, k, spec(3, 1), &SearchBudget::default()).unwrap();
            let full = run(n, k, 3, 1, true);
            assert!(s.value <= full.value, "({n},{k})");
        }
    }

    #[test]
    fn deterministic_reruns() {
        let a = run(6, 4, 3, 1, true);
        let b = run(6, 4, 3, 1, true);
        assert_eq!(a.value, b.value);
        assert_eq!(a.nodes, b.nodes);
        let wa: Vec<String> = a.witnesses.iter().map(|f| f.to_text()).collect();
        let wb: Vec<String> = b.witnesses.iter().map(|f| f.to_text()).collect();
        assert_eq!(wa, wb);
    }

    #[test]
    fn witness_cap_respected() {
        let one = SearchBudget {
            max_witnesses: 1,
            ..SearchBudget::default()
        };
        let res = max_family(5, 3, spec(3, 1), true, &one).unwrap();
        assert_eq!(res.value, 4);
        assert_eq!(res.witnesses.len(), 1);
        let none = SearchBudget {
            max_witnesses: 0,
            ..SearchBudget::default()
        };
        let res = max_family(5, 3, spec(3, 1), true, &none).unwrap();
        assert_eq!(res.value, 4);
        assert!(res.witnesses.is_empty());
    }

    #[test]
    fn claims_grid_cross_check() {
        let grid = [(4, 3), (5, 3), (6, 3), (5, 4), (6, 4)];
        let report = verify_claims(&grid, &SearchBudget::default()).unwrap();
        assert!(report.all_agree());
        let by_point = |n: u32, k: u32| {
            report
                .rows
                .iter()
                .find(|r| r.n == n && r.k == k)
                .expect("row present")
        };
        assert_eq!(by_point(4, 3).agreement, Some(true));
        assert_eq!(by_point(5, 4).agreement, Some(true));
        // (6,4) is open in the classification: the search value is new
        // data and the row carries no verdict.
        let open = by_point(6, 4);
        assert_eq!(open.classify.regime, Regime::Unknown);
        assert_eq!(open.agreement, None);
        assert_eq!(open.search_value, 9);
    }
}
