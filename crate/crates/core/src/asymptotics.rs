//! Hypergeometric window sums: exact theta values, the local normal
//! approximation, log-residual trends, the windowed-sum limit compared
//! against both candidate erf closed forms, and the exact lower-bound
//! ratio for the window-majority construction.
//!
//! Everything inside a formula is exact rational; floats appear only
//! when a log or an erf has to be taken, and those conversions go
//! through the `ratio` module so magnitudes beyond f64 range are safe.

use crate::counting::{binom, card_c};
use crate::erf::erf;
use crate::ratio::{ln_ratio, ratio_to_f64};
use crate::Error;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::f64::consts::{PI, SQRT_2};

fn rat_u(v: u64) -> BigRational {
    BigRational::from(BigInt::from(v))
}

fn check_c(c: &BigRational) -> Result<(), Error> {
    if !c.is_positive() {
        return Err(Error::InvalidParam(format!("window width must be positive, got {c}")));
    }
    Ok(())
}

/// theta_exact(n, k, j) = C(k, j) C(n-k, k-j) / C(n, k): the chance
/// that a uniform random k-subset meets a fixed one in exactly j
/// points. Zero when j is outside the support.
pub fn theta_exact(n: u32, k: u32, j: u32) -> Result<BigRational, Error> {
    if k > n || j > k || n == 0 {
        return Err(Error::InvalidParam(format!(
            "need 0 <= j <= k <= n, n >= 1, got n={n} k={k} j={j}"
        )));
    }
    let num = binom(k as u64, j as i64) * binom((n - k) as u64, (k - j) as i64);
    Ok(BigRational::new(
        BigInt::from(num),
        BigInt::from(binom(n as u64, k as i64)),
    ))
}

/// Integer window around the mean j ~ p^2 n.
#[derive(Clone, Debug)]
pub struct ThetaWindow {
    pub n: u32,
    pub k: u32,
    /// Effective ratio k/n, exact.
    pub p: BigRational,
    pub c: BigRational,
    /// All j in [0, k] with (j - p^2 n)^2 <= c^2 n, ascending.
    pub members: Vec<u32>,
    /// True when the real interval extends past [0, k]; members are
    /// clamped, so a full-cover window still sums to exactly 1.
    pub escaped: bool,
}

impl ThetaWindow {
    /// The containment J subset of [k/2, k-1] that the lower-bound
    /// argument needs; checked exactly.
    pub fn contained_in_upper_half(&self) -> bool {
        self.members.iter().all(|&j| 2 * j >= self.k && j + 1 <= self.k)
    }
}

/// Builds the window with p = k/n. Membership is decided by the exact
/// rational inequality, so boundary j values are bit-reproducible.
pub fn theta_window(n: u32, k: u32, c: &BigRational) -> Result<ThetaWindow, Error> {
    if k == 0 || k >= n {
        return Err(Error::InvalidParam(format!("need 1 <= k < n, got n={n} k={k}")));
    }
    check_c(c)?;
    let p = BigRational::new(BigInt::from(k), BigInt::from(n));
    let p2n = BigRational::new(BigInt::from(k as u64 * k as u64), BigInt::from(n));
    let c2n = c * c * rat_u(n as u64);
    let inside = |j: &BigRational| {
        let d = j - &p2n;
        &d * &d <= c2n
    };
    let members: Vec<u32> = (0..=k).filter(|&j| inside(&rat_u(j as u64))).collect();
    let escaped = inside(&-BigRational::one()) || inside(&rat_u(k as u64 + 1));
    Ok(ThetaWindow { n, k, p, c: c.clone(), members, escaped })
}

/// The deML exponent E(j) with d = j - p^2 n:
/// E = d^2 (p^2 q^2 n - (1-2p)^2 d) / (2 p^4 q^4 n^2), exact.
fn deml_exponent(n: u32, p: &BigRational, j: u32) -> BigRational {
    let q = BigRational::one() - p;
    let nn = rat_u(n as u64);
    let d = rat_u(j as u64) - p * p * &nn;
    let pq = p * &q;
    let shape = &pq * &pq * &nn - (BigRational::one() - rat_u(2) * p).pow(2) * &d;
    &d * &d * shape / (rat_u(2) * pq.pow(4) * &nn * &nn)
}

/// Main term of the local approximation:
/// 1/(p q sqrt(2 pi n)) exp(-E(j)). The remainder r_{n,p}(j) is set to
/// zero; `residual_report` measures how large it really is.
pub fn theta_approx(n: u32, p: &BigRational, j: u32) -> Result<f64, Error> {
    if n == 0 || !p.is_positive() || *p >= BigRational::one() {
        return Err(Error::InvalidParam(format!("need n >= 1, 0 < p < 1, got n={n} p={p}")));
    }
    Ok(ln_theta_approx(n, p, j).exp())
}

/// Log of the main term, stable far below f64 underflow.
pub fn ln_theta_approx(n: u32, p: &BigRational, j: u32) -> f64 {
    let q = BigRational::one() - p;
    let e = ratio_to_f64(&deml_exponent(n, p, j));
    let pq = ratio_to_f64(&(p * &q));
    -e - pq.ln() - 0.5 * (2.0 * PI * n as f64).ln()
}

/// Nearest integer to p*n (half rounds up), the uniformity the
/// approximation is evaluated at; the exact k/n replaces p downstream.
pub fn round_k(n: u32, p: &BigRational) -> Result<u32, Error> {
    if !p.is_positive() || *p >= BigRational::one() {
        return Err(Error::InvalidParam(format!("need 0 < p < 1, got {p}")));
    }
    let k = (p * rat_u(n as u64) + BigRational::new(BigInt::one(), BigInt::from(2)))
        .floor()
        .to_integer()
        .to_u32()
        .ok_or_else(|| Error::InvalidParam(format!("p n out of range: p={p} n={n}")))?;
    Ok(k.max(1))
}

#[derive(Clone, Debug)]
pub struct ResidualRow {
    pub n: u32,
    pub k: u32,
    pub window_lo: u32,
    pub window_hi: u32,
    pub max_abs_residual: f64,
}

/// Max log-residual per n: how far the exact theta strays from the
/// main term over the window. The underlying claim is a limit, so the
/// report shows a trend, not a rate.
#[derive(Clone, Debug)]
pub struct ResidualReport {
    pub rows: Vec<ResidualRow>,
}

impl ResidualReport {
    /// Steps where the max residual failed to strictly decrease.
    pub fn non_monotone_steps(&self) -> usize {
        self.rows
            .windows(2)
            .filter(|w| w[1].max_abs_residual >= w[0].max_abs_residual)
            .count()
    }

    pub fn final_max_residual(&self) -> Option<f64> {
        self.rows.last().map(|r| r.max_abs_residual)
    }
}

pub fn residual_report(
    p: &BigRational,
    c: &BigRational,
    n_list: &[u32],
) -> Result<ResidualReport, Error> {
    check_c(c)?;
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let k = round_k(n, p)?;
        let window = theta_window(n, k, c)?;
        if window.escaped || window.members.is_empty() {
            return Err(Error::InvalidParam(format!(
                "window escapes [0, k] at n={n} k={k} c={c}"
            )));
        }
        let p_eff = window.p.clone();
        let mut max_abs: f64 = 0.0;
        for &j in &window.members {
            let exact = theta_exact(n, k, j)?;
            let residual = ln_ratio(&exact)? - ln_theta_approx(n, &p_eff, j);
            max_abs = max_abs.max(residual.abs());
        }
        rows.push(ResidualRow {
            n,
            k,
            window_lo: window.members[0],
            window_hi: *window.members.last().unwrap(),
            max_abs_residual: max_abs,
        });
    }
    Ok(ResidualReport { rows })
}

/// Exact windowed sum: sum over j in the window of theta_exact(n,k,j),
/// as one bigint numerator over C(n, k).
pub fn sum_theta_window_exact(n: u32, k: u32, c: &BigRational) -> Result<BigRational, Error> {
    let window = theta_window(n, k, c)?;
    let nk = (n - k) as u64;
    let mut num = BigUint::zero();
    for &j in &window.members {
        num += binom(k as u64, j as i64) * binom(nk, (k - j) as i64);
    }
    Ok(BigRational::new(
        BigInt::from(num),
        BigInt::from(binom(n as u64, k as i64)),
    ))
}

/// Float view of the windowed sum at k = round(p n).
pub fn sum_theta_window(n: u32, p: &BigRational, c: &BigRational) -> Result<f64, Error> {
    let k = round_k(n, p)?;
    Ok(ratio_to_f64(&sum_theta_window_exact(n, k, c)?))
}

#[derive(Clone, Debug)]
pub struct ErfLimitRow {
    pub n: u32,
    pub k: u32,
    pub window_size: usize,
    pub sum: f64,
}

/// Windowed sums along n_list next to the two candidate closed forms
/// for their limit: the stated erf(3c/(sqrt2 p)) and the Gaussian
/// integral erf(c/(sqrt2 p q)) that the same argument's displayed
/// density actually integrates to. The report never assumes which one
/// is right; `matched_form` says what the data shows.
#[derive(Clone, Debug)]
pub struct ErfLimitReport {
    pub rows: Vec<ErfLimitRow>,
    pub statement_value: f64,
    pub gaussian_value: f64,
}

impl ErfLimitReport {
    pub fn successive_diffs(&self) -> Vec<f64> {
        self.rows.windows(2).map(|w| (w[1].sum - w[0].sum).abs()).collect()
    }

    pub fn final_gap_statement(&self) -> Option<f64> {
        self.rows.last().map(|r| (r.sum - self.statement_value).abs())
    }

    pub fn final_gap_gaussian(&self) -> Option<f64> {
        self.rows.last().map(|r| (r.sum - self.gaussian_value).abs())
    }

    /// "gaussian", "statement", "both", or "neither" at tolerance tol.
    pub fn matched_form(&self, tol: f64) -> &'static str {
        let s = self.final_gap_statement().map(|g| g <= tol).unwrap_or(false);
        let g = self.final_gap_gaussian().map(|g| g <= tol).unwrap_or(false);
        match (g, s) {
            (true, true) => "both",
            (true, false) => "gaussian",
            (false, true) => "statement",
            (false, false) => "neither",
        }
    }
}

pub fn erf_limit_report(
    p: &BigRational,
    c: &BigRational,
    n_list: &[u32],
) -> Result<ErfLimitReport, Error> {
    check_c(c)?;
    if !p.is_positive() || *p >= BigRational::one() {
        return Err(Error::InvalidParam(format!("need 0 < p < 1, got {p}")));
    }
    let pf = ratio_to_f64(p);
    let cf = ratio_to_f64(c);
    let qf = 1.0 - pf;
    let statement_value = erf(3.0 * cf / (SQRT_2 * pf));
    let gaussian_value = erf(cf / (SQRT_2 * pf * qf));
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let k = round_k(n, p)?;
        let window = theta_window(n, k, c)?;
        let sum = ratio_to_f64(&sum_theta_window_exact(n, k, c)?);
        rows.push(ErfLimitRow { n, k, window_size: window.members.len(), sum });
    }
    Ok(ErfLimitReport { rows, statement_value, gaussian_value })
}

/// One j of the per-summand chain behind the lower-bound argument.
/// For even k both stated inequalities are recorded; odd k has one.
#[derive(Clone, Debug)]
pub struct SummandRow {
    pub j: u32,
    pub first_holds: bool,
    pub second_holds: Option<bool>,
    pub holds: bool,
}

/// Exact comparison of the window-majority count against the star
/// bound, with the per-summand inequalities reported row by row.
#[derive(Clone, Debug)]
pub struct CBoundReport {
    pub n: u32,
    pub k: u32,
    /// card_C(n, k) / C(n-1, k-1), exact.
    pub ratio: BigRational,
    /// 1 - delta.
    pub threshold: BigRational,
    pub passes: bool,
    /// Window constant the per-summand rows were evaluated at.
    pub window_c: BigRational,
    pub window_contained: bool,
    pub rows: Vec<SummandRow>,
}

impl CBoundReport {
    pub fn ratio_f64(&self) -> f64 {
        ratio_to_f64(&self.ratio)
    }

    pub fn summands_holding(&self) -> usize {
        self.rows.iter().filter(|r| r.holds).count()
    }
}

/// Checks card_C(n,k) > (1-delta) C(n-1, k-1) by exact bigint ratio,
/// for 1/2 < k/n < 2/3. The per-summand inequalities of the written
/// argument are evaluated over the theta window at c = 1/4 and
/// reported as data: they genuinely fail for j above p^2 n, while the
/// aggregate exact ratio is what the report asserts.
pub fn verify_c_lower_bound(n: u32, k: u32, delta: &BigRational) -> Result<CBoundReport, Error> {
    if n > 5000 {
        return Err(Error::InvalidParam(format!("n={n} beyond the supported 5000")));
    }
    if 2 * k <= n || 3 * k >= 2 * n {
        return Err(Error::InvalidParam(format!(
            "need 1/2 < k/n < 2/3, got n={n} k={k}"
        )));
    }
    if !delta.is_positive() || *delta >= BigRational::one() {
        return Err(Error::InvalidParam(format!("need 0 < delta < 1, got {delta}")));
    }
    let ratio = BigRational::new(
        BigInt::from(card_c(n, k)?),
        BigInt::from(binom(n as u64 - 1, k as i64 - 1)),
    );
    let threshold = BigRational::one() - delta;
    let passes = ratio > threshold;

    let window_c = BigRational::new(BigInt::one(), BigInt::from(4));
    let window = theta_window(n, k, &window_c)?;
    let window_contained = window.contained_in_upper_half();
    let p = &window.p;
    let q = BigRational::one() - p;
    let nn = rat_u(n as u64);
    let mut rows = Vec::with_capacity(window.members.len());
    for &j in &window.members {
        let jn = BigRational::new(BigInt::from(j), BigInt::from(n));
        let row = if k % 2 == 0 {
            let first = (p - &jn) / p > q;
            let den = BigRational::one() - rat_u(2) * p + &jn + nn.recip();
            let second = (p - &jn) / den > p / &q;
            SummandRow {
                j,
                first_holds: first,
                second_holds: Some(second),
                holds: first && second,
            }
        } else {
            let first =
                rat_u((k - j) as u64) / rat_u((n - k) as u64) > *p;
            SummandRow { j, first_holds: first, second_holds: None, holds: first }
        };
        rows.push(row);
    }
    Ok(CBoundReport {
        n,
        k,
        ratio,
        threshold,
        passes,
        window_c,
        window_contained,
        rows,
    })
}
