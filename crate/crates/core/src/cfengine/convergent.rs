use num_traits::{One, Zero};

use super::fraction::ContinuedFraction;
use crate::error::Result;
use crate::exactnum::Rational;

/// Canonical numerator/denominator pair after `n` partial quotients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub n: usize,
    pub numerator: Rational,
    pub denominator: Rational,
    /// `numerator / denominator`, or `None` when the denominator vanishes.
    pub value: Option<Rational>,
}

/// Streams convergents from the three-term recurrence
/// `X_n = b_n X_{n−1} + a_n X_{n−2}` in exact arithmetic, seeded with
/// `A_{−1} = 1, A_0 = b0, B_{−1} = 0, B_0 = 1`. The pairs are not normalized.
pub struct Convergents<'a> {
    cf: &'a ContinuedFraction,
    n: usize,
    a_prev: Rational,
    a_cur: Rational,
    b_prev: Rational,
    b_cur: Rational,
}

impl<'a> Convergents<'a> {
    pub fn new(cf: &'a ContinuedFraction) -> Self {
        Self {
            cf,
            n: 0,
            a_prev: Rational::one(),
            a_cur: cf.b0().clone(),
            b_prev: Rational::zero(),
            b_cur: Rational::one(),
        }
    }

    fn step(&mut self) -> Result<Convergent> {
        let n = self.n + 1;
        let an = self.cf.partial_numerator(n as i64)?;
        let bn = self.cf.partial_denominator(n as i64)?;
        let next_a = &bn * &self.a_cur + &an * &self.a_prev;
        let next_b = &bn * &self.b_cur + &an * &self.b_prev;
        self.a_prev = std::mem::replace(&mut self.a_cur, next_a);
        self.b_prev = std::mem::replace(&mut self.b_cur, next_b);
        self.n = n;
        let value = (!self.b_cur.is_zero()).then(|| &self.a_cur / &self.b_cur);
        Ok(Convergent {
            n,
            numerator: self.a_cur.clone(),
            denominator: self.b_cur.clone(),
            value,
        })
    }
}

impl Iterator for Convergents<'_> {
    type Item = Result<Convergent>;

    fn next(&mut self) -> Option<Self::Item> {
        Some(self.step())
    }
}

/// Convergents `f_1 … f_N`.
pub fn convergents(cf: &ContinuedFraction, count: usize) -> Result<Vec<Convergent>> {
    Convergents::new(cf).take(count).collect()
}
