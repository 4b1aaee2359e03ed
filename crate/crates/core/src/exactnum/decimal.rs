use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::rational::{floor_log10, pow10, round_half_away, Rational};
use crate::error::{Error, Result};

/// A decimal value `mantissa · 10^(−scale)`.
///
/// `precision_digits` records how many decimals the producer asked for; values
/// coming out of a rounding operation always carry `scale ≥ precision_digits`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HighPrecisionDecimal {
    mantissa: BigInt,
    scale: u32,
    precision_digits: u32,
}

/// Rounds `r` to `digits` decimal places (nearest, ties away from zero).
pub fn hp_from_rational(r: &Rational, digits: u32) -> HighPrecisionDecimal {
    HighPrecisionDecimal::from_rational(r, digits)
}

impl HighPrecisionDecimal {
    pub fn new(mantissa: BigInt, scale: u32) -> Self {
        Self {
            mantissa,
            scale,
            precision_digits: scale,
        }
    }

    pub fn from_rational(r: &Rational, digits: u32) -> Self {
        let scaled = r * Rational::from_integer(pow10(digits));
        Self::new(round_half_away(&scaled), digits)
    }

    /// Rounds to `sig` significant digits. The scale is never negative, so
    /// values with more than `sig` integer digits are rounded to an integer.
    pub fn round_significant(r: &Rational, sig: u32) -> Self {
        assert!(sig >= 1);
        if r.is_zero() {
            return Self::new(BigInt::zero(), sig - 1);
        }
        let exp = floor_log10(&r.abs());
        let scale = (sig as i64 - 1 - exp).max(0) as u32;
        let mut out = Self::from_rational(r, scale);
        // Rounding may carry into a new leading digit (0.99996 -> 1.0000).
        if out.mantissa.abs() >= pow10(sig) && scale > 0 {
            out = Self::from_rational(r, scale - 1);
        }
        out
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn precision_digits(&self) -> u32 {
        self.precision_digits
    }

    pub fn to_rational(&self) -> Rational {
        Rational::new(self.mantissa.clone(), pow10(self.scale))
    }

    /// Re-rounds to fewer (or more) decimal places.
    pub fn rescale(&self, digits: u32) -> Self {
        Self::from_rational(&self.to_rational(), digits)
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    /// Decimal text with trailing zeros removed, keeping at least one
    /// fractional digit (`3.01030` -> `3.0103`, `1.00000` -> `1.0`).
    pub fn to_trimmed_string(&self) -> String {
        let s = self.to_string();
        if !s.contains('.') {
            return format!("{s}.0");
        }
        let t = s.trim_end_matches('0');
        if t.ends_with('.') {
            format!("{t}0")
        } else {
            t.to_string()
        }
    }
}

impl std::ops::Neg for HighPrecisionDecimal {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            mantissa: -self.mantissa,
            ..self
        }
    }
}

impl fmt::Display for HighPrecisionDecimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = self.mantissa.abs().to_str_radix(10);
        let sign = if self.mantissa.is_negative() { "-" } else { "" };
        if self.scale == 0 {
            return write!(f, "{sign}{digits}");
        }
        let width = self.scale as usize + 1;
        let padded = format!("{digits:0>width$}");
        let (int_part, frac_part) = padded.split_at(padded.len() - self.scale as usize);
        write!(f, "{sign}{int_part}.{frac_part}")
    }
}

impl FromStr for HighPrecisionDecimal {
    type Err = Error;

    /// Parses plain decimal notation such as `-0.785398`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Domain(format!("not a decimal number: {s:?}"));
        let t = s.trim();
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let joined = format!("{int_part}{frac_part}");
        let mut mantissa: BigInt = joined.parse().map_err(|_| bad())?;
        if neg {
            mantissa = -mantissa;
        }
        Ok(Self::new(mantissa, frac_part.len() as u32))
    }
}

/// Formats `r` as `d.ddde-k` with `sig` significant digits (`0` for zero).
pub fn format_scientific(r: &Rational, sig: u32) -> String {
    assert!(sig >= 1);
    if r.is_zero() {
        return "0".to_string();
    }
    let mut exp = floor_log10(&r.abs());
    let scaled = |e: i64| {
        let shift = sig as i64 - 1 - e;
        let factor = if shift >= 0 {
            Rational::from_integer(pow10(shift as u32))
        } else {
            Rational::new(1.into(), pow10((-shift) as u32))
        };
        round_half_away(&(r * factor))
    };
    let mut m = scaled(exp);
    if m.abs() >= pow10(sig) {
        exp += 1;
        m = scaled(exp);
    }
    let digits = m.abs().to_str_radix(10);
    let sign = if m.is_negative() { "-" } else { "" };
    let (head, tail) = digits.split_at(1);
    if tail.is_empty() {
        format!("{sign}{head}e{exp}")
    } else {
        format!("{sign}{head}.{tail}e{exp}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use proptest::prelude::*;

    #[test]
    fn from_rational_examples() {
        assert_eq!(hp_from_rational(&rat(1, 3), 5).to_string(), "0.33333");
        assert_eq!(hp_from_rational(&rat(-4, 5), 3).to_string(), "-0.800");
        // 26/33 = 0.78787878...; six places round up at the seventh digit (8).
        assert_eq!(hp_from_rational(&rat(26, -33), 6).to_string(), "-0.787879");
    }

    #[test]
    fn display_small_and_integral() {
        assert_eq!(HighPrecisionDecimal::new(5.into(), 3).to_string(), "0.005");
        assert_eq!(HighPrecisionDecimal::new((-5).into(), 3).to_string(), "-0.005");
        assert_eq!(HighPrecisionDecimal::new(42.into(), 0).to_string(), "42");
        assert_eq!(HighPrecisionDecimal::new(1234.into(), 2).to_string(), "12.34");
    }

    #[test]
    fn parse_roundtrip() {
        let d: HighPrecisionDecimal = "-0.7853981634".parse().unwrap();
        assert_eq!(d.scale(), 10);
        assert_eq!(d.to_string(), "-0.7853981634");
        assert!("1.2.3".parse::<HighPrecisionDecimal>().is_err());
        assert!("".parse::<HighPrecisionDecimal>().is_err());
        assert!("abc".parse::<HighPrecisionDecimal>().is_err());
    }

    #[test]
    fn significant_rounding() {
        let d = HighPrecisionDecimal::round_significant(&rat(301_029_995, 100_000_000), 6);
        assert_eq!(d.to_string(), "3.01030");
        assert_eq!(d.to_trimmed_string(), "3.0103");
        let one = HighPrecisionDecimal::round_significant(&rat(1, 1), 6);
        assert_eq!(one.to_trimmed_string(), "1.0");
        let carry = HighPrecisionDecimal::round_significant(&rat(999_996, 1_000_000), 5);
        assert_eq!(carry.to_string(), "1.0000");
        let small = HighPrecisionDecimal::round_significant(&rat(1, 3000), 3);
        assert_eq!(small.to_string(), "0.000333");
    }

    #[test]
    fn scientific() {
        assert_eq!(format_scientific(&rat(956, 10_000_000), 3), "9.56e-5");
        assert_eq!(format_scientific(&rat(-2146, 10_000), 4), "-2.146e-1");
        assert_eq!(format_scientific(&rat(99_999, 100_000), 3), "1.00e0");
        assert_eq!(format_scientific(&rat(0, 1), 3), "0");
        assert_eq!(format_scientific(&rat(7, 1), 1), "7e0");
    }

    proptest! {
        #[test]
        fn conversion_error_is_below_one_ulp(
            num in -1_000_000_000i64..1_000_000_000,
            den in 1i64..1_000_000,
            digits in 1u32..30,
        ) {
            let r = rat(num, den);
            let d = hp_from_rational(&r, digits);
            let err = (d.to_rational() - &r).abs();
            prop_assert!(err < Rational::new(1.into(), pow10(digits)));
            prop_assert!(d.scale() >= d.precision_digits());
        }
    }
}
