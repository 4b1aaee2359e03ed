use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};

/// Exact arbitrary-precision fraction.
///
/// `BigRational` already keeps the representation reduced with a positive
/// denominator and represents zero as `0/1`.
pub type Rational = num_rational::BigRational;

/// Builds the reduced fraction `num/den`.
pub fn rat_normalize(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Rational> {
    let den = den.into();
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(Rational::new(num.into(), den))
}

/// Small-integer fraction shorthand. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    rat_normalize(num, den).expect("rat: zero denominator")
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn pow10(k: u32) -> BigInt {
    BigInt::from(10u32).pow(k)
}

/// Rounds to the nearest integer, ties away from zero.
pub fn round_half_away(r: &Rational) -> BigInt {
    let num = r.numer();
    let den = r.denom();
    let two_den: BigInt = den * 2;
    let twice: BigInt = num.abs() * 2 + den;
    let q = twice.div_floor(&two_den);
    if num.is_negative() {
        -q
    } else {
        q
    }
}

pub fn abs_diff(x: &Rational, y: &Rational) -> Rational {
    (x - y).abs()
}

fn ten_pow(e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(pow10(e as u32))
    } else {
        Rational::new(BigInt::one(), pow10((-e) as u32))
    }
}

/// `floor(log10(r))` for a strictly positive rational, computed exactly.
pub fn floor_log10(r: &Rational) -> i64 {
    assert!(r.is_positive(), "floor_log10 of a non-positive value");
    let digits = |x: &BigInt| x.to_str_radix(10).trim_start_matches('-').len() as i64;
    let mut e = digits(r.numer()) - digits(r.denom());
    while &ten_pow(e) > r {
        e -= 1;
    }
    while &ten_pow(e + 1) <= r {
        e += 1;
    }
    e
}
