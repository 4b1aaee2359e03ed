//! π/4 from Machin-type arctangent decompositions, summed in exact rationals.
//!
//! Two unrelated decompositions are evaluated at `digits + GUARD_DIGITS` and
//! must agree to within one unit in the last guarded place before a value is
//! handed out. Nothing here touches the continued-fraction engine.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::decimal::HighPrecisionDecimal;
use super::rational::{pow10, round_half_away, Rational};
use crate::error::{Error, Result};

/// Extra decimal places carried by every high-precision intermediate.
pub const GUARD_DIGITS: u32 = 10;

/// π/4 = 4·atan(1/5) − atan(1/239)
const MACHIN: &[(i64, u32)] = &[(4, 5), (-1, 239)];
/// π/4 = 12·atan(1/18) + 8·atan(1/57) − 5·atan(1/239)
const GAUSS: &[(i64, u32)] = &[(12, 18), (8, 57), (-5, 239)];

/// Partial sum of `atan(1/x) = Σ (−1)^k / ((2k+1)·x^(2k+1))`, stopping at the
/// first term whose magnitude is below `1/bound`. For an alternating series
/// with decreasing terms that omitted term bounds the truncation error.
pub fn arctan_inverse(x: u32, bound: &BigInt) -> Rational {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = x.clone();
    let mut sum = Rational::from_integer(0.into());
    let mut k: u64 = 0;
    loop {
        let den = &power * BigInt::from(2 * k + 1);
        if &den > bound {
            break;
        }
        let term = Rational::new(BigInt::one(), den);
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power *= &x2;
        k += 1;
    }
    sum
}

/// Evaluates a decomposition with total truncation error below `10^−digits`.
fn evaluate_formula(formula: &[(i64, u32)], digits: u32) -> Rational {
    let weight: i64 = formula.iter().map(|(c, _)| c.abs()).sum();
    let bound = pow10(digits) * BigInt::from(weight);
    formula
        .iter()
        .map(|&(coeff, x)| arctan_inverse(x, &bound) * Rational::from_integer(coeff.into()))
        .sum()
}

/// The 4·atan(1/5) − atan(1/239) value with error below `10^−digits`.
pub fn machin_pi_quarter(digits: u32) -> Rational {
    evaluate_formula(MACHIN, digits)
}

/// The 12·atan(1/18) + 8·atan(1/57) − 5·atan(1/239) value with error below `10^−digits`.
pub fn gauss_pi_quarter(digits: u32) -> Rational {
    evaluate_formula(GAUSS, digits)
}

/// Checks that two estimates round to values at most one unit apart at `digits` places.
pub fn cross_check(first: &Rational, second: &Rational, digits: u32) -> Result<()> {
    let scale = Rational::from_integer(pow10(digits));
    let a = round_half_away(&(first * &scale));
    let b = round_half_away(&(second * &scale));
    if (&a - &b).abs() > BigInt::one() {
        return Err(Error::OracleInconsistency(format!(
            "decompositions disagree at {digits} places: {a} vs {b}"
        )));
    }
    Ok(())
}

/// π/4 rounded to `digits` decimal places (equivalently significant digits,
/// since the value lies in [0.1, 1)).
pub fn pi_quarter(digits: u32) -> Result<HighPrecisionDecimal> {
    if digits == 0 {
        return Err(Error::Domain("pi_quarter needs at least one digit".into()));
    }
    let work = digits + GUARD_DIGITS;
    let machin = machin_pi_quarter(work);
    let gauss = gauss_pi_quarter(work);
    cross_check(&machin, &gauss, work)?;
    Ok(HighPrecisionDecimal::from_rational(&machin, digits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    const PI_QUARTER_60: &str = "0.785398163397448309615660845819875721049292349843776455243736";

    #[test]
    fn twelve_digits() {
        assert_eq!(pi_quarter(12).unwrap().to_string(), "0.785398163397");
    }

    #[test]
    fn one_digit() {
        assert_eq!(pi_quarter(1).unwrap().to_string(), "0.8");
    }

    #[test]
    fn fifty_digits_match_reference_string() {
        let expected: HighPrecisionDecimal = PI_QUARTER_60.parse().unwrap();
        assert_eq!(pi_quarter(50).unwrap(), expected.rescale(50));
    }

    #[test]
    fn zero_digits_rejected() {
        assert!(matches!(pi_quarter(0), Err(Error::Domain(_))));
    }

    #[test]
    fn agreement_across_precisions() {
        for p in [5u32, 10, 20, 40] {
            let lo = pi_quarter(p).unwrap();
            let hi = pi_quarter(p + 10).unwrap();
            assert_eq!(hi.rescale(p), lo, "p = {p}");
        }
    }

    #[test]
    fn cross_check_detects_disagreement() {
        let a = rat(785_398, 1_000_000);
        assert!(cross_check(&a, &a, 6).is_ok());
        assert!(cross_check(&a, &rat(785_399, 1_000_000), 6).is_ok());
        assert!(matches!(
            cross_check(&a, &rat(785_400, 1_000_000), 6),
            Err(Error::OracleInconsistency(_))
        ));
    }

    #[test]
    fn leibniz_brackets_oracle() {
        let target = pi_quarter(30).unwrap().to_rational();
        let mut sum = rat(0, 1);
        let mut partial = Vec::new();
        for j in 0..=101i64 {
            let term = rat(1, 2 * j + 1);
            if j % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
            partial.push(sum.clone());
        }
        for k in 0..=50usize {
            assert!(partial[2 * k + 1] < target, "S_{}", 2 * k + 1);
            assert!(target < partial[2 * k], "S_{}", 2 * k);
        }
    }
}
