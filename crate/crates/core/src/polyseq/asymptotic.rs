use std::collections::BTreeMap;

use num_traits::Zero;

use super::ratfun::RationalFunction;
use crate::error::{Error, Result};
use crate::exactnum::{int, Rational};

/// Expansion `Σ c_k n^k` for `k = top_degree, top_degree − 1, …, remainder_order + 1`
/// of a rational function as `n → ∞`; the omitted part is `O(n^remainder_order)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymptoticExpansion {
    pub top_degree: i64,
    /// Coefficients from `n^top_degree` downwards.
    pub coefficients: Vec<Rational>,
    /// First omitted power of `n`.
    pub remainder_order: i64,
}

impl AsymptoticExpansion {
    /// Coefficient of `n^power`, zero outside the retained range.
    pub fn coefficient(&self, power: i64) -> Rational {
        let idx = self.top_degree - power;
        if idx < 0 {
            return Rational::zero();
        }
        self.coefficients
            .get(idx as usize)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Value of the truncated expansion at `x`.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut total = Rational::zero();
        for (i, c) in self.coefficients.iter().enumerate() {
            let power = self.top_degree - i as i64;
            let factor = if power >= 0 {
                num_traits::pow(x.clone(), power as usize)
            } else {
                int(1) / num_traits::pow(x.clone(), (-power) as usize)
            };
            total += c * factor;
        }
        total
    }
}

/// Exact expansion in descending powers of `n` obtained by long division of
/// the numerator by the denominator, retaining powers down to `n^order`.
pub fn asymptotic_expand(f: &RationalFunction, order: i64) -> Result<AsymptoticExpansion> {
    let top_degree = f
        .degree()
        .ok_or_else(|| Error::Domain("the zero function has no leading term".into()))?;
    if order > top_degree {
        return Err(Error::Domain(format!(
            "order {order} exceeds the leading power {top_degree}"
        )));
    }
    let den = f.denominator().coefficients();
    let dd = den.len() as i64 - 1;
    let lead = &den[den.len() - 1];
    // Remainder as exponent -> coefficient, so negative powers fit naturally.
    let mut rem: BTreeMap<i64, Rational> = f
        .numerator()
        .coefficients()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i as i64, c.clone()))
        .collect();
    let mut coefficients = Vec::new();
    for power in (order..=top_degree).rev() {
        let top = power + dd;
        let c = rem.get(&top).cloned().unwrap_or_else(Rational::zero) / lead;
        if !c.is_zero() {
            for (i, d) in den.iter().enumerate() {
                if d.is_zero() {
                    continue;
                }
                let e = power + i as i64;
                let entry = rem.entry(e).or_insert_with(Rational::zero);
                *entry -= &c * d;
                if entry.is_zero() {
                    rem.remove(&e);
                }
            }
        }
        coefficients.push(c);
    }
    Ok(AsymptoticExpansion {
        top_degree,
        coefficients,
        remainder_order: order - 1,
    })
}
