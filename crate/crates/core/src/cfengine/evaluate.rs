use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};

use super::fraction::ContinuedFraction;
use crate::error::{Error, Result};
use crate::exactnum::{pow10, round_half_away, HighPrecisionDecimal, Rational, GUARD_DIGITS};

/// Result of a precision-targeted evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    /// `f_depth` rounded to `digits + GUARD_DIGITS` places.
    pub value: HighPrecisionDecimal,
    /// The convergent as carried by the working-precision recurrence.
    pub approx: Rational,
    pub depth: usize,
}

/// Forward recurrence on an integerized equivalent fraction with a bounded
/// working precision.
///
/// Rational coefficients are cleared by the scaling `r_n = den(a_n)·den(b_n)`,
/// which leaves every convergent value unchanged. Since the value only
/// depends on the ratio `A_n/B_n`, all four state integers are shifted right
/// together whenever they outgrow the working precision.
struct ScaledRecurrence<'a> {
    cf: &'a ContinuedFraction,
    n: i64,
    prev_scale: BigInt,
    a_prev: BigInt,
    a_cur: BigInt,
    b_prev: BigInt,
    b_cur: BigInt,
    keep_bits: u64,
}

impl<'a> ScaledRecurrence<'a> {
    fn new(cf: &'a ContinuedFraction, keep_bits: u64) -> Self {
        let b0 = cf.b0();
        let v = b0.denom().clone();
        Self {
            cf,
            n: 0,
            prev_scale: BigInt::one(),
            a_prev: v.clone(),
            a_cur: b0.numer().clone(),
            b_prev: BigInt::zero(),
            b_cur: v,
            keep_bits,
        }
    }

    /// Advances one step and returns the new `(A_n, B_n)` (scaled).
    fn step(&mut self) -> Result<(BigInt, BigInt)> {
        self.n += 1;
        let an = self.cf.partial_numerator(self.n)?;
        let bn = self.cf.partial_denominator(self.n)?;
        let (p, q) = (an.numer(), an.denom());
        let (s, t) = (bn.numer(), bn.denom());
        let a_hat = t * &self.prev_scale * p;
        let b_hat = q * s;
        self.prev_scale = q * t;
        let next_a = &b_hat * &self.a_cur + &a_hat * &self.a_prev;
        let next_b = &b_hat * &self.b_cur + &a_hat * &self.b_prev;
        self.a_prev = std::mem::replace(&mut self.a_cur, next_a);
        self.b_prev = std::mem::replace(&mut self.b_cur, next_b);
        let bits = [&self.a_prev, &self.a_cur, &self.b_prev, &self.b_cur]
            .iter()
            .map(|x| x.bits())
            .max()
            .unwrap_or(0);
        if bits > self.keep_bits + 64 {
            let shift = bits - self.keep_bits;
            for x in [&mut self.a_prev, &mut self.a_cur, &mut self.b_prev, &mut self.b_cur] {
                *x = &*x >> shift;
            }
        }
        Ok((self.a_cur.clone(), self.b_cur.clone()))
    }
}

/// `|x1/y1 − x2/y2| < 10^−k` by cross-multiplication.
fn close(p1: &(BigInt, BigInt), p2: &(BigInt, BigInt), k: u32) -> bool {
    let lhs = (&p1.0 * &p2.1 - &p2.0 * &p1.1).abs() * pow10(k);
    let rhs = (&p1.1 * &p2.1).abs();
    lhs < rhs
}

fn describe(pair: &Option<(BigInt, BigInt)>, digits: u32) -> String {
    match pair {
        Some((x, y)) if !y.is_zero() => {
            HighPrecisionDecimal::from_rational(&Rational::new(x.clone(), y.clone()), digits)
                .to_string()
        }
        _ => "undef".to_string(),
    }
}

/// Evaluates to `digits` decimals, stopping at the first `n` where
/// `|f_n − f_{n−1}|` and `|f_{n−1} − f_{n−2}|` are both below
/// `10^−(digits+2)`. All three convergents must be defined.
pub fn evaluate(cf: &ContinuedFraction, digits: u32, max_depth: usize) -> Result<Evaluation> {
    if digits == 0 {
        return Err(Error::Domain("digits must be at least 1".into()));
    }
    let depth_digits = max_depth.max(1).to_string().len() as u32;
    let work = digits + GUARD_DIGITS + depth_digits + 8;
    let keep_bits = (work as u64 * 3322).div_ceil(1000);
    let tol = digits + 2;

    let mut rec = ScaledRecurrence::new(cf, keep_bits);
    let mut window: [Option<(BigInt, BigInt)>; 3] = [None, None, None];
    for n in 1..=max_depth {
        let (x, y) = rec.step()?;
        window.rotate_left(1);
        window[2] = (!y.is_zero()).then_some((x, y));
        if let [Some(f2), Some(f1), Some(f0)] = &window {
            if close(f0, f1, tol) && close(f1, f2, tol) {
                let approx = Rational::new(f0.0.clone(), f0.1.clone());
                return Ok(Evaluation {
                    value: HighPrecisionDecimal::from_rational(&approx, digits + GUARD_DIGITS),
                    approx,
                    depth: n,
                });
            }
        }
    }
    Err(Error::NoConvergence {
        depth: max_depth,
        last: window.iter().map(|w| describe(w, digits + 2)).collect(),
    })
}

fn round_div(num: BigInt, den: &BigInt) -> BigInt {
    let mut q = round_half_away(&Rational::new(num.abs(), den.abs()));
    if (num.sign() == Sign::Minus) != den.is_negative() {
        q = -q;
    }
    q
}

/// Bottom-up evaluation of the fraction truncated at `depth` (tail value 0),
/// folded in fixed-point arithmetic with `digits + GUARD_DIGITS` places and
/// rounded to `digits`.
pub fn evaluate_backward(
    cf: &ContinuedFraction,
    depth: usize,
    digits: u32,
) -> Result<HighPrecisionDecimal> {
    let work = digits + GUARD_DIGITS;
    let one = pow10(work);
    let fixed = |r: &Rational| round_div(r.numer() * &one, r.denom());
    let mut tail = BigInt::zero();
    for n in (1..=depth as i64).rev() {
        let an = cf.partial_numerator(n)?;
        let bn = cf.partial_denominator(n)?;
        let denom = fixed(&bn) + &tail;
        if denom.is_zero() {
            return Err(Error::Domain(format!("truncated tail vanishes at n = {n}")));
        }
        tail = round_div(an.numer() * &one * &one, &(an.denom() * denom));
    }
    let total = fixed(cf.b0()) + tail;
    let value = HighPrecisionDecimal::new(total, work);
    Ok(value.rescale(digits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, pi_quarter};
    use crate::polyseq::PiecewiseSequence;
    use crate::presets::conjecture_pi4 as conjecture;

    fn constant_cf(b0: i64, a: i64, b: i64) -> ContinuedFraction {
        ContinuedFraction::new(
            int(b0),
            PiecewiseSequence::constant(1, int(a)),
            PiecewiseSequence::constant(1, int(b)),
            "const",
        )
        .unwrap()
    }

    /// floor(sqrt(2) · 10^k) from the integer square root of 2·10^(2k).
    fn sqrt2_digits(k: u32) -> Rational {
        let n = BigInt::from(2) * pow10(2 * k);
        Rational::new(n.sqrt(), pow10(k))
    }

    #[test]
    fn conjecture_four_digits() {
        let e = evaluate(&conjecture(), 4, 1_000).unwrap();
        let target = -pi_quarter(4).unwrap();
        assert_eq!(e.value.rescale(4), target);
    }

    #[test]
    fn sqrt2_matches_integer_square_root() {
        let e = evaluate(&constant_cf(1, 1, 2), 50, 10_000).unwrap();
        let oracle = sqrt2_digits(60);
        let err = (e.approx - oracle).abs();
        assert!(err < Rational::new(BigInt::one(), pow10(50)));
    }

    #[test]
    fn oscillating_fraction_does_not_converge() {
        match evaluate(&constant_cf(0, 1, 0), 6, 500) {
            Err(Error::NoConvergence { depth, last }) => {
                assert_eq!(depth, 500);
                assert_eq!(last.len(), 3);
            }
            other => panic!("expected no convergence, got {other:?}"),
        }
    }

    #[test]
    fn backward_and_forward_agree() {
        let cf = conjecture();
        let backward = evaluate_backward(&cf, 30, 10).unwrap();
        let exact = super::super::convergents(&cf, 30).unwrap()[29].value.clone().unwrap();
        let err = (backward.to_rational() - exact).abs();
        assert!(err < Rational::new(BigInt::one(), pow10(10)));
    }

    #[test]
    fn fifty_digits_at_depth_200() {
        let cf = conjecture();
        let exact = super::super::convergents(&cf, 200).unwrap()[199].value.clone().unwrap();
        let value = HighPrecisionDecimal::from_rational(&exact, 50);
        assert_eq!(value, -pi_quarter(50).unwrap());
    }
}
