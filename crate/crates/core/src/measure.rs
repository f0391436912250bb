//! Product-measure analogue of the counting problem.
//!
//! Under mu_p each point of [n] is kept independently with probability
//! p, so a family's measure is the probability that the random set is a
//! member. The 3-wise non-trivial maximum measure w3(p) has a closed
//! piecewise limit in p with one continuous seam and two genuine jumps;
//! `w3_boundary_report` exhibits all three exactly.

use crate::family::Family;
use crate::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// A validated bias 0 < p < 1, carried exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureParam {
    p: BigRational,
    q: BigRational,
}

impl MeasureParam {
    pub fn new(p: BigRational) -> Result<Self, Error> {
        if p <= BigRational::zero() || p >= BigRational::one() {
            return Err(Error::InvalidParam(format!("need 0 < p < 1, got {p}")));
        }
        let q = BigRational::one() - &p;
        Ok(MeasureParam { p, q })
    }

    pub fn p(&self) -> &BigRational {
        &self.p
    }

    pub fn q(&self) -> &BigRational {
        &self.q
    }
}

/// mu_p(family) = sum over members F of p^|F| q^(n-|F|), exactly.
/// Members are grouped by size first, so the work is O(n) big-rational
/// multiplications past the grouping pass.
pub fn mu(family: &Family, param: &MeasureParam) -> Result<BigRational, Error> {
    let n = family.n();
    let mut count_by_size = vec![0u64; n as usize + 1];
    for m in family.members() {
        count_by_size[m.len() as usize] += 1;
    }
    // Walk sizes with running powers: p^s ascending, q^(n-s) descending.
    let mut acc = BigRational::zero();
    let mut p_pow = BigRational::one();
    for s in 0..=n as usize {
        if count_by_size[s] > 0 {
            let q_pow = param.q.pow((n as usize - s) as i32);
            acc += BigRational::from(BigInt::from(count_by_size[s])) * &p_pow * q_pow;
        }
        p_pow *= &param.p;
    }
    Ok(acc)
}

/// 4 p^3 q + p^4: the measure of the majority-on-four-points family,
/// independent of the ambient n.
pub fn f_measure(param: &MeasureParam) -> BigRational {
    let p3 = param.p.pow(3);
    rat(4, 1) * &p3 * &param.q + p3 * &param.p
}

/// Which closed form governs w3 at a given bias.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum W3Branch {
    /// p <= 1/3: value p^2.
    Square,
    /// 1/3 <= p <= 1/2: value 4p^3 q + p^4.
    BMeasure,
    /// 1/2 < p <= 2/3: value p.
    Linear,
    /// 2/3 < p < 1: value 1.
    One,
}

impl W3Branch {
    fn value(self, param: &MeasureParam) -> BigRational {
        match self {
            W3Branch::Square => param.p.pow(2),
            W3Branch::BMeasure => f_measure(param),
            W3Branch::Linear => param.p.clone(),
            W3Branch::One => BigRational::one(),
        }
    }
}

impl fmt::Display for W3Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            W3Branch::Square => "p^2",
            W3Branch::BMeasure => "4p^3q+p^4",
            W3Branch::Linear => "p",
            W3Branch::One => "1",
        };
        f.write_str(s)
    }
}

fn branch_left_of(p: &BigRational) -> W3Branch {
    // Branch governing (p - eps, p): intervals are closed on the right.
    if *p <= rat(1, 3) {
        W3Branch::Square
    } else if *p <= rat(1, 2) {
        W3Branch::BMeasure
    } else if *p <= rat(2, 3) {
        W3Branch::Linear
    } else {
        W3Branch::One
    }
}

fn branch_right_of(p: &BigRational) -> W3Branch {
    // Branch governing (p, p + eps).
    if *p < rat(1, 3) {
        W3Branch::Square
    } else if *p < rat(1, 2) {
        W3Branch::BMeasure
    } else if *p < rat(2, 3) {
        W3Branch::Linear
    } else {
        W3Branch::One
    }
}

/// The limiting maximum measure with the branch that produced it.
/// At a seam the left branch applies (the intervals are left-open,
/// right-closed); both sides of every seam are visible through
/// `w3_boundary_report`.
pub fn w3_limit(param: &MeasureParam) -> (BigRational, W3Branch) {
    let b = branch_left_of(&param.p);
    (b.value(param), b)
}

/// One-sided values of the w3 closed form around a bias.
#[derive(Clone, Debug)]
pub struct BoundaryReport {
    pub p: BigRational,
    pub left_branch: W3Branch,
    pub right_branch: W3Branch,
    pub left_value: BigRational,
    pub right_value: BigRational,
    pub continuous: bool,
    /// right_value - left_value; zero exactly when continuous.
    pub jump: BigRational,
}

pub fn w3_boundary_report(param: &MeasureParam) -> BoundaryReport {
    let lb = branch_left_of(&param.p);
    let rb = branch_right_of(&param.p);
    let lv = lb.value(param);
    let rv = rb.value(param);
    BoundaryReport {
        p: param.p.clone(),
        left_branch: lb,
        right_branch: rb,
        continuous: lv == rv,
        jump: &rv - &lv,
        left_value: lv,
        right_value: rv,
    }
}

/// Cited stability thresholds for near-extremal families: a family
/// within `gap_absolute` of the maximum measure (or within
/// `gap_relative` of it multiplicatively) must already contain the
/// core of an extremal one. Recorded constants, not derived here.
#[derive(Clone, Debug)]
pub struct StabilityConstants {
    pub gap_absolute: BigRational,
    pub gap_relative: BigRational,
}

pub fn stability_constants() -> StabilityConstants {
    StabilityConstants {
        gap_absolute: rat(9, 5000),
        gap_relative: rat(18, 3125),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::gen_b_measure;
    use crate::ratio::ratio_to_f64;
    use crate::subset::KSubset;

    fn mp(num: i64, den: i64) -> MeasureParam {
        MeasureParam::new(rat(num, den)).unwrap()
    }

    #[test]
    fn param_validates() {
        assert!(MeasureParam::new(rat(0, 1)).is_err());
        assert!(MeasureParam::new(rat(1, 1)).is_err());
        assert!(MeasureParam::new(rat(-1, 2)).is_err());
        assert!(MeasureParam::new(rat(5, 4)).is_err());
        assert_eq!(mp(2, 5).q(), &rat(3, 5));
    }

    #[test]
    fn measure_of_majority_family_is_ambient_free() {
        // mu_p of the majority-on-[4] family equals 4p^3q + p^4 for
        // every ambient n: the defining event ignores points past 4.
        for n in 4..=7 {
            let fam = gen_b_measure(n).unwrap();
            for p in [mp(1, 3), mp(2, 5), mp(1, 2), mp(7, 10)] {
                assert_eq!(mu(&fam, &p).unwrap(), f_measure(&p), "n={n}");
            }
        }
    }

    #[test]
    fn measure_of_complete_and_power_set() {
        let fam = Family::complete(4, 2).unwrap();
        let p = mp(1, 3);
        // 6 p^2 q^2 = 6 * (1/9)(4/9) = 8/27.
        assert_eq!(mu(&fam, &p).unwrap(), rat(8, 27));

        // The full power set has measure exactly 1.
        let all: Vec<KSubset> = (0u64..8).map(KSubset).collect();
        let power = Family::make(3, 0, all).unwrap();
        for p in [mp(1, 7), mp(1, 2), mp(9, 10)] {
            assert_eq!(mu(&power, &p).unwrap(), BigRational::one());
        }
    }

    #[test]
    fn w3_limit_frozen_branches() {
        let cases = [
            (mp(1, 4), rat(1, 16), W3Branch::Square),
            (mp(1, 3), rat(1, 9), W3Branch::Square),
            (mp(2, 5), rat(112, 625), W3Branch::BMeasure),
            (mp(1, 2), rat(5, 16), W3Branch::BMeasure),
            (mp(3, 5), rat(3, 5), W3Branch::Linear),
            (mp(2, 3), rat(2, 3), W3Branch::Linear),
            (mp(3, 4), rat(1, 1), W3Branch::One),
        ];
        for (p, want, branch) in cases {
            let (v, b) = w3_limit(&p);
            assert_eq!(v, want, "p={}", p.p());
            assert_eq!(b, branch, "p={}", p.p());
        }
    }

    #[test]
    fn boundary_seams() {
        // 1/3: the two closed forms meet: p^2 = 1/9 = 4p^3q + p^4.
        let r = w3_boundary_report(&mp(1, 3));
        assert!(r.continuous);
        assert_eq!(r.left_value, rat(1, 9));
        assert_eq!(r.right_value, rat(1, 9));
        assert_eq!(r.jump, rat(0, 1));

        // 1/2: genuine jump 5/16 -> 1/2.
        let r = w3_boundary_report(&mp(1, 2));
        assert!(!r.continuous);
        assert_eq!(r.left_value, rat(5, 16));
        assert_eq!(r.right_value, rat(1, 2));
        assert_eq!(r.jump, rat(3, 16));

        // 2/3: genuine jump 2/3 -> 1.
        let r = w3_boundary_report(&mp(2, 3));
        assert!(!r.continuous);
        assert_eq!(r.jump, rat(1, 3));

        // Interior points are trivially continuous.
        assert!(w3_boundary_report(&mp(2, 5)).continuous);
        assert!(w3_boundary_report(&mp(17, 24)).continuous);
    }

    #[test]
    fn stability_constants_frozen() {
        let c = stability_constants();
        assert_eq!(c.gap_absolute, rat(9, 5000));
        assert_eq!(c.gap_relative, rat(18, 3125));
        assert!((ratio_to_f64(&c.gap_absolute) - 0.0018).abs() < 1e-15);
        assert!((ratio_to_f64(&c.gap_relative) - 0.00576).abs() < 1e-15);
    }
}
