//! Gauss hypergeometric layer: ₂F₁ partial sums, the coefficient laws of the
//! continued fraction for the contiguous ratio
//! `R(a,b,c;z) = ₂F₁(a,b+1;c+1;z) / ₂F₁(a,b;c;z)`, and construction of that
//! fraction as a [`ContinuedFraction`].

use num_traits::{One, Zero};

use crate::cfengine::ContinuedFraction;
use crate::error::{Error, Result};
use crate::exactnum::{int, rat, Rational};
use crate::polyseq::{Piece, PiecewiseSequence, Polynomial, RationalFunction, Rule};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussParameters {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub z: Rational,
}

impl GaussParameters {
    /// Rejects `c ∈ {0, −1, −2, …}`, where the Pochhammer denominators vanish.
    pub fn new(a: Rational, b: Rational, c: Rational, z: Rational) -> Result<Self> {
        if c.is_integer() && c <= Rational::zero() {
            return Err(Error::Parameter(format!(
                "c = {c} is zero or a negative integer"
            )));
        }
        Ok(Self { a, b, c, z })
    }
}

/// Coefficients `d_1 … d_N` of `R = 1/(1 + K(d_n z / 1))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussCoefficients {
    pub d: Vec<Rational>,
    pub params: GaussParameters,
}

impl GaussCoefficients {
    /// `d_n`, 1-based.
    pub fn get(&self, n: usize) -> Option<&Rational> {
        n.checked_sub(1).and_then(|i| self.d.get(i))
    }
}

/// Rising factorial `x(x+1)…(x+k−1)`; the empty product is 1.
pub fn pochhammer(x: &Rational, k: u32) -> Rational {
    (0..k).fold(Rational::one(), |acc, i| acc * (x + int(i as i64)))
}

/// `Σ_{k=0..N} (a)_k (b)_k / ((c)_k k!) · z^k`, exact.
pub fn f21_partial_sum(p: &GaussParameters, terms: u32) -> Result<Rational> {
    let mut term = Rational::one();
    let mut sum = Rational::one();
    for k in 0..terms {
        let kk = int(k as i64);
        let den = (&p.c + &kk) * (&kk + int(1));
        if den.is_zero() {
            return Err(Error::Parameter(format!("(c)_k vanishes at k = {}", k + 1)));
        }
        term = term * (&p.a + &kk) * (&p.b + &kk) * &p.z / den;
        sum += &term;
    }
    Ok(sum)
}

/// `d_n` from the even law (`n = 2k`) or the odd law (`n = 2k+1`, so `d_1`
/// comes from the odd law at `k = 0`).
fn coefficient_law(p: &GaussParameters, n: u64) -> Result<Rational> {
    let k = int((n / 2) as i64);
    let (num, den) = if n.is_multiple_of(2) {
        (
            (&p.b + &k) * (&p.c - &p.a + &k),
            (&p.c + int(2) * &k - int(1)) * (&p.c + int(2) * &k),
        )
    } else {
        (
            (&p.a + &k) * (&p.c - &p.b + &k),
            (&p.c + int(2) * &k) * (&p.c + int(2) * &k + int(1)),
        )
    };
    if den.is_zero() {
        return Err(Error::Parameter(format!(
            "coefficient law denominator vanishes at k = {k} (n = {n})"
        )));
    }
    Ok(num / den)
}

pub fn gauss_coefficients(p: &GaussParameters, count: usize) -> Result<GaussCoefficients> {
    let d = (1..=count as u64)
        .map(|n| coefficient_law(p, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(GaussCoefficients {
        d,
        params: p.clone(),
    })
}

/// The coefficient laws as closed forms in `n`: the even law with `k = n/2`
/// and the odd law with `k = (n−1)/2`. Collapses to a single rule when the
/// two agree, as they do for `(1/2, 0, 1/2)`.
pub fn coefficient_rule(p: &GaussParameters) -> Result<Rule> {
    let half = RationalFunction::from(Polynomial::new(vec![int(0), rat(1, 2)]));
    let half_prev = RationalFunction::from(Polynomial::new(vec![rat(-1, 2), rat(1, 2)]));
    let c = |x: &Rational| RationalFunction::constant(x.clone());
    let n = RationalFunction::var();
    let den = n.add(&c(&(&p.c - int(1)))).mul(&n.add(&c(&p.c)));
    let even_num = half.add(&c(&p.b)).mul(&half.add(&c(&(&p.c - &p.a))));
    let odd_num = half_prev.add(&c(&p.a)).mul(&half_prev.add(&c(&(&p.c - &p.b))));
    Ok(Rule::alternating(even_num.div(&den)?, odd_num.div(&den)?))
}

/// `0 + 1/(1 + d_1 z/(1 + d_2 z/(1 + …)))`: `a_1 = 1`, `b_n = 1` and
/// `a_{n+1} = d_n z`. Coefficients are validated up to `n_hint`.
pub fn gauss_cf(p: &GaussParameters, n_hint: usize) -> Result<ContinuedFraction> {
    if p.z.is_zero() {
        return Err(Error::Parameter(
            "z = 0 makes every partial numerator after the first vanish".into(),
        ));
    }
    gauss_coefficients(p, n_hint)?;
    let tail = coefficient_rule(p)?.shift(-1).scale(&p.z);
    let a = PiecewiseSequence::new(
        1,
        vec![
            Piece {
                lo: 1,
                hi: Some(1),
                rule: Rule::constant(int(1)),
            },
            Piece {
                lo: 2,
                hi: None,
                rule: tail,
            },
        ],
    )?;
    let b = PiecewiseSequence::constant(1, int(1));
    let label = format!("gauss({}, {}, {}; {})", p.a, p.b, p.c, p.z);
    ContinuedFraction::new(int(0), a, b, label)
}
