use num_traits::{Signed, Zero};

use super::convergent::Convergents;
use super::fraction::ContinuedFraction;
use crate::error::Result;
use crate::exactnum::{HighPrecisionDecimal, Rational};

/// Convergent `f_n` and its distance to a reference value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorEntry {
    pub n: usize,
    pub value: Option<Rational>,
    pub abs_error: Option<Rational>,
}

/// `|f_n − reference|` for `n = 1..=count`, exact against the decimal
/// reference. Undefined convergents carry `None`.
pub fn error_sequence(
    cf: &ContinuedFraction,
    reference: &HighPrecisionDecimal,
    count: usize,
) -> Result<Vec<ErrorEntry>> {
    let target = reference.to_rational();
    Convergents::new(cf)
        .take(count)
        .map(|c| {
            let c = c?;
            let abs_error = c.value.as_ref().map(|v| (v - &target).abs());
            Ok(ErrorEntry {
                n: c.n,
                value: c.value,
                abs_error,
            })
        })
        .collect()
}

/// Ratios `e_{k+1}/e_k` between consecutive defined errors, to 6 significant
/// digits. An exact hit (zero error) ends the list.
pub fn empirical_error_ratios(errors: &[Option<Rational>]) -> Vec<HighPrecisionDecimal> {
    let defined: Vec<&Rational> = errors.iter().flatten().collect();
    let mut out = Vec::new();
    for pair in defined.windows(2) {
        if pair[0].is_zero() || pair[1].is_zero() {
            break;
        }
        out.push(HighPrecisionDecimal::round_significant(&(pair[1] / pair[0]), 6));
    }
    out
}
