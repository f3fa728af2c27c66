//! Exact rationals at the interface: `p/q` parsing and canonical printing.

use crate::error::{invalid, Result};
use crate::BigCount;
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use num_rational::BigRational as Rational;

/// Parses `"p/q"` or an integer `"p"`. Decimal notation is rejected so that
/// every value entering an exact pipeline is exact.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let ok = |s: &str| {
        let digits = s.strip_prefix('-').unwrap_or(s);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !ok(num) || !ok(den) || den.starts_with('-') {
        return invalid(format!("expected a rational of the form p/q, got {text:?}"));
    }
    let p: BigInt = num.parse().expect("validated digits");
    let q: BigInt = den.parse().expect("validated digits");
    if q.is_zero() {
        return invalid("zero denominator");
    }
    Ok(BigRational::new(p, q))
}

/// `p/q` in lowest terms, or a plain integer when `q = 1`.
pub fn format_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn from_count(c: &BigCount) -> BigRational {
    BigRational::from_integer(BigInt::from_biguint(Sign::Plus, c.clone()))
}

pub fn from_u64(x: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// `floor(x)` for non-negative `x`, as an unsigned integer.
pub fn floor_u64(x: &BigRational) -> Option<u64> {
    if x.is_negative() {
        return None;
    }
    let f = x.floor().to_integer();
    u64::try_from(f).ok()
}
