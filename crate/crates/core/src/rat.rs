//! Small helpers around `num::BigRational`.
//!
//! All numeric data in this crate is exact: integers, `BigRational`, or
//! finite-field coordinates. Rationals cross the JSON boundary as `"a/b"`
//! strings (plain `"a"` for integers), so parsing and formatting live here
//! next to the conversion helpers.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{validation, Result};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational as `a/b`, or just `a` when the denominator is 1.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `a/b` or `a` with optional sign; rejects zero denominators.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let numer: BigInt = match num_str.parse() {
        Ok(n) => n,
        Err(_) => return validation(format!("bad rational numerator {num_str:?}")),
    };
    let denom: BigInt = match den_str.parse() {
        Ok(d) => d,
        Err(_) => return validation(format!("bad rational denominator {den_str:?}")),
    };
    if denom.is_zero() {
        return validation(format!("zero denominator in rational {s:?}"));
    }
    Ok(BigRational::new(numer, denom))
}

/// True when `r` is an integer multiple of `1/1`, i.e. has denominator 1
/// after reduction.
pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// Exact conversion to `i64`; errors if the value is non-integral or out of
/// range.
pub fn to_i64(r: &Rat) -> Result<i64> {
    if !is_integer(r) {
        return validation(format!("expected integer, got {}", format_rat(r)));
    }
    match i64::try_from(r.numer().clone()) {
        Ok(v) => Ok(v),
        Err(_) => validation(format!("integer out of range: {}", r.numer())),
    }
}

/// Strips every factor of `p` from `n`.
pub fn prime_to_p_part(mut n: u64, p: u64) -> u64 {
    assert!(p >= 2, "p must be at least 2");
    while n > 0 && n % p == 0 {
        n /= p;
    }
    n
}

/// Greatest common divisor of the absolute values, `gcd(0, 0) = 0`.
pub fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Positive rational gcd of a set of rationals: the generator of the
/// subgroup of Q they generate. Empty or all-zero input yields 0.
pub fn rational_gcd(values: &[Rat]) -> Rat {
    let mut acc = Rat::zero();
    for v in values {
        let v = v.abs();
        if v.is_zero() {
            continue;
        }
        if acc.is_zero() {
            acc = v;
            continue;
        }
        // gcd(a/b, c/d) = gcd(ad, cb) / bd
        let num = num::integer::gcd(
            v.numer() * acc.denom(),
            acc.numer() * v.denom(),
        );
        let den = v.denom() * acc.denom();
        acc = BigRational::new(num, den);
    }
    acc
}
