//! Bridges between exact rationals and floats.
//!
//! Exact `BigRational` values are the working currency everywhere else;
//! this module confines every lossy conversion. Conversions stay
//! well-defined far beyond the f64 exponent range because they work on
//! leading bits plus an explicit base-2 exponent.

use crate::Error;
use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::f64::consts::LN_2;

/// Parses "a/b" or a plain integer "a" into an exact rational.
/// Whitespace around the parts is tolerated; a zero denominator is not.
pub fn parse_ratio(s: &str) -> Result<BigRational, Error> {
    let parse_int = |part: &str| -> Result<BigInt, Error> {
        part.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("bad integer {part:?} in ratio {s:?}")))
    };
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (parse_int(a)?, parse_int(b)?),
        None => (parse_int(s)?, BigInt::from(1)),
    };
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in ratio {s:?}")));
    }
    Ok(BigRational::new(num, den))
}

/// Renders a rational as "a/b" in lowest terms, or "a" when integral.
pub fn ratio_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Natural log of a positive big integer. Uses the top 64 bits as a
/// mantissa and accounts for the remaining magnitude as an exact
/// multiple of ln 2, so values like C(1600, 880), far beyond f64 range,
/// still come out to within ~1e-13 relative error.
pub fn ln_biguint(x: &BigUint) -> Result<f64, Error> {
    if x.is_zero() {
        return Err(Error::InvalidParam("ln of zero".into()));
    }
    let bits = x.bits();
    if bits <= 64 {
        return Ok((x.to_u64().expect("fits in a u64") as f64).ln());
    }
    let top = (x >> (bits - 64)).to_u64().expect("exactly 64 bits");
    Ok((top as f64).ln() + (bits - 64) as f64 * LN_2)
}

/// Natural log of a positive rational.
pub fn ln_ratio(r: &BigRational) -> Result<f64, Error> {
    if !r.is_positive() {
        return Err(Error::InvalidParam(format!("ln of non-positive {r}")));
    }
    let (_, num) = r.numer().clone().into_parts();
    let (_, den) = r.denom().clone().into_parts();
    Ok(ln_biguint(&num)? - ln_biguint(&den)?)
}

fn magnitude_to_f64(x: &BigUint) -> f64 {
    // Keep ~96 leading bits, divide in f64, restore the exponent.
    let bits = x.bits();
    if bits <= 96 {
        return x.to_f64().expect("small magnitude");
    }
    let top = (x >> (bits - 96)).to_f64().expect("96-bit magnitude");
    top * 2f64.powi((bits - 96) as i32)
}

/// Rational to f64 with correct behaviour for magnitudes whose
/// numerator or denominator overflows f64 on its own. Accurate to a few
/// ulp; overflow saturates to +-inf as usual.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let sign = if r.numer().sign() == Sign::Minus { -1.0 } else { 1.0 };
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    let (nb, db) = (num.bits() as i64, den.bits() as i64);
    // Shift both sides near 2^96 so each converts exactly, then patch
    // the quotient's exponent back in, split to dodge powi overflow.
    let ns = (nb - 96).max(0);
    let ds = (db - 96).max(0);
    let nf = magnitude_to_f64(&(num >> ns));
    let df = magnitude_to_f64(&(den >> ds));
    let e = ns - ds;
    let q = nf / df;
    let half = (e / 2) as i32;
    sign * q * 2f64.powi(half) * 2f64.powi((e - half as i64) as i32)
}

/// 15 significant digits in scientific form, e.g. "1.20461538461538e0".
/// Rust's fixed-precision float formatting rounds ties to even, so the
/// rendering is deterministic across runs and platforms.
pub fn format_sig15(x: f64) -> String {
    format!("{x:.14e}")
}
