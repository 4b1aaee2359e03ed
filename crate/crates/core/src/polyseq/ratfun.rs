use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::polynomial::Polynomial;
use crate::error::{Error, Result};
use crate::exactnum::{int, Rational};

/// Quotient of two polynomials in `n`, kept in a canonical form:
/// the gcd of numerator and denominator is constant, all coefficients are
/// integers with overall content 1, and the denominator's leading
/// coefficient is positive. Zero is stored as `0/1`.
///
/// Two rational functions are equal as functions iff their stored
/// coefficients are identical.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    numerator: Polynomial,
    denominator: Polynomial,
}

impl RationalFunction {
    pub fn new(numerator: Polynomial, denominator: Polynomial) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(numerator, denominator))
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        Self::canonical(p, Polynomial::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_polynomial(Polynomial::constant(c))
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(int(c))
    }

    pub fn var() -> Self {
        Self::from_polynomial(Polynomial::var())
    }

    fn canonical(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self {
                numerator: Polynomial::zero(),
                denominator: Polynomial::one(),
            };
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);

        let (num_ints, num_lcm) = num.clear_denominators();
        let (den_ints, den_lcm) = den.clear_denominators();
        // Bring both sides over a common multiplier, then strip the content.
        let lcm = num_lcm.lcm(&den_lcm);
        let num_f = &lcm / &num_lcm;
        let den_f = &lcm / &den_lcm;
        let mut num_ints: Vec<BigInt> = num_ints.into_iter().map(|c| c * &num_f).collect();
        let mut den_ints: Vec<BigInt> = den_ints.into_iter().map(|c| c * &den_f).collect();
        let content = num_ints
            .iter()
            .chain(den_ints.iter())
            .fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if den_ints.last().unwrap().is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        let div = content * sign;
        for c in num_ints.iter_mut().chain(den_ints.iter_mut()) {
            *c = &*c / &div;
        }
        let to_poly = |v: Vec<BigInt>| Polynomial::new(v.into_iter().map(Rational::from_integer).collect());
        Self {
            numerator: to_poly(num_ints),
            denominator: to_poly(den_ints),
        }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.denominator.degree() == Some(0)
    }

    /// The polynomial this function equals, if its denominator is constant.
    pub fn as_polynomial(&self) -> Option<Polynomial> {
        let c = self.denominator.as_constant()?;
        Some(self.numerator.scale(&(Rational::one() / c)))
    }

    pub fn as_constant(&self) -> Option<Rational> {
        self.as_polynomial()?.as_constant()
    }

    /// `deg(numerator) − deg(denominator)`; `None` for the zero function.
    pub fn degree(&self) -> Option<i64> {
        let n = self.numerator.degree()? as i64;
        Some(n - self.denominator.degree().unwrap() as i64)
    }

    /// Exact value at an integer index.
    pub fn eval(&self, n: i64) -> Result<Rational> {
        let den = self.denominator.eval_int(n);
        if den.is_zero() {
            return Err(Error::Pole { n });
        }
        Ok(self.numerator.eval_int(n) / den)
    }

    pub fn eval_rational(&self, x: &Rational) -> Option<Rational> {
        let den = self.denominator.eval(x);
        if den.is_zero() {
            None
        } else {
            Some(self.numerator.eval(x) / den)
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::canonical(
            &self.numerator * &other.numerator,
            &self.denominator * &other.denominator,
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::canonical(
            &(&self.numerator * &other.denominator) + &(&other.numerator * &self.denominator),
            &self.denominator * &other.denominator,
        )
    }

    pub fn neg(&self) -> Self {
        Self {
            numerator: -&self.numerator,
            denominator: self.denominator.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(
            &self.numerator * &other.denominator,
            &self.denominator * &other.numerator,
        ))
    }

    pub fn pow(&self, e: u32) -> Self {
        Self::canonical(self.numerator.pow(e), self.denominator.pow(e))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::canonical(self.numerator.scale(c), self.denominator.clone())
    }

    /// `g(n) = f(n + k)`.
    pub fn shift(&self, k: i64) -> Self {
        Self::canonical(self.numerator.shift(k), self.denominator.shift(k))
    }

    /// Integer indices in `[lo, hi]` where the function has a pole.
    pub fn poles_in(&self, lo: i64, hi: i64) -> Vec<i64> {
        self.denominator.integer_roots(lo, hi)
    }

    /// Integer indices in `[lo, hi]` where the function vanishes.
    pub fn zeros_in(&self, lo: i64, hi: i64) -> Vec<i64> {
        self.numerator.integer_roots(lo, hi)
    }
}

/// Product of two rational functions, reduced.
pub fn ratfun_multiply(f: &RationalFunction, g: &RationalFunction) -> RationalFunction {
    f.mul(g)
}

/// `g(n) = f(n + k)` with exact coefficient recomputation.
pub fn shift_index(f: &RationalFunction, k: i64) -> RationalFunction {
    f.shift(k)
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        Self::from_polynomial(p)
    }
}

/// DSL text; polynomials print bare, quotients as `(num)/(den)`.
impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_polynomial() {
            Some(p) => write!(f, "{p}"),
            None => write!(f, "({})/({})", self.numerator, self.denominator),
        }
    }
}
