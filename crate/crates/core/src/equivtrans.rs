//! Equivalence transformations `(a_n, b_n) ↦ (r_n r_{n−1} a_n, r_n b_n)`.
//!
//! With `r_0 = 1` and every `r_n ≠ 0` the transformed fraction has exactly
//! the same convergent values; only the canonical pairs `(A_n, B_n)` change.

use num_traits::{One, Zero};

use crate::cfengine::{convergents, ContinuedFraction, VERIFY_LIMIT};
use crate::error::{Error, Result};
use crate::exactnum::{int, Rational};
use crate::polyseq::{Piece, PiecewiseSequence, Polynomial, Rule};

/// Scaling factors `r_0, r_1, …` with `r_0 = 1` and no zero factor up to
/// [`VERIFY_LIMIT`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalingSequence {
    r: PiecewiseSequence,
}

impl ScalingSequence {
    pub fn new(r: PiecewiseSequence) -> Result<Self> {
        if r.start() != 0 {
            return Err(Error::Domain(format!(
                "scaling sequence must start at n = 0, not {}",
                r.start()
            )));
        }
        if let Some(&n) = r.poles_up_to(VERIFY_LIMIT).first() {
            return Err(Error::Pole { n });
        }
        if let Some(&n) = r.zeros_up_to(VERIFY_LIMIT).first() {
            return Err(Error::InvalidScaling { n });
        }
        if !r.eval(0)?.is_one() {
            return Err(Error::Domain("scaling sequence needs r_0 = 1".into()));
        }
        Ok(Self { r })
    }

    pub fn identity() -> Self {
        Self {
            r: PiecewiseSequence::constant(0, int(1)),
        }
    }

    /// `r_0 = 1`, `r_n = −(3n − 2)` for `n ≥ 1`: turns unit partial
    /// denominators into `−1, −4, −7, …`.
    pub fn linear_progression() -> Self {
        let r = PiecewiseSequence::new(
            0,
            vec![
                Piece {
                    lo: 0,
                    hi: Some(0),
                    rule: Rule::constant(int(1)),
                },
                Piece {
                    lo: 1,
                    hi: None,
                    rule: Rule::Closed(Polynomial::from_ints(&[2, -3]).into()),
                },
            ],
        )
        .expect("static scaling is well formed");
        Self { r }
    }

    pub fn sequence(&self) -> &PiecewiseSequence {
        &self.r
    }

    pub fn eval(&self, n: i64) -> Result<Rational> {
        self.r.eval(n)
    }
}

/// Applies `b̃_n = r_n b_n`, `ã_n = r_n r_{n−1} a_n` symbolically. Piece
/// boundaries of the result are the union of the inputs' (shifted) ones and
/// indices 1 and 2 are always explicit constants.
pub fn apply_equivalence(cf: &ContinuedFraction, r: &ScalingSequence) -> Result<ContinuedFraction> {
    let seq = r.sequence();
    let prev = seq.shift(-1);
    let breaks = |s: &PiecewiseSequence| s.pieces().iter().map(|p| p.lo).collect::<Vec<_>>();
    let b = seq
        .product(cf.b())
        .materialize_head(2)?
        .absorb_head_pieces(&breaks(cf.b()));
    let a = seq
        .product(&prev)
        .product(cf.a())
        .materialize_head(2)?
        .absorb_head_pieces(&breaks(cf.a()));
    match ContinuedFraction::new(cf.b0().clone(), a, b, format!("{} (scaled)", cf.label())) {
        Err(Error::ZeroPartialNumerator { n }) => Err(Error::InvalidScaling { n }),
        other => other,
    }
}

/// Closed form `ã_n = −(3n−2)(3n−5)(n−1)² / ((2n−3)(2n−1))` of the scaled
/// Gauss kernel numerators, `n ≥ 2`.
pub fn exact_tilde_numerator(n: i64) -> Result<Rational> {
    if n < 2 {
        return Err(Error::Domain(format!("closed form needs n >= 2, got {n}")));
    }
    let num = -(3 * n - 2) * (3 * n - 5) * (n - 1) * (n - 1);
    let den = (2 * n - 3) * (2 * n - 1);
    Ok(Rational::new(num.into(), den.into()))
}

/// Replaces `a_1`, keeping the rest of the fraction.
pub fn with_head_numerator(cf: &ContinuedFraction, a1: Rational) -> Result<ContinuedFraction> {
    let head = cf.a().materialize_head(1)?;
    let mut pieces: Vec<Piece> = head.pieces().to_vec();
    pieces[0].rule = Rule::constant(a1);
    let a = PiecewiseSequence::new(1, pieces)?;
    ContinuedFraction::new(cf.b0().clone(), a, cf.b().clone(), cf.label())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvarianceVerdict {
    pub n: usize,
    /// Convergent values agree exactly (both undefined counts as agreement).
    pub values_equal: bool,
    /// Canonical pairs `(A_n, B_n)` coincide; informational only.
    pub pairs_equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvarianceReport {
    pub transformed: ContinuedFraction,
    pub verdicts: Vec<InvarianceVerdict>,
}

impl InvarianceReport {
    pub fn all_equal(&self) -> bool {
        self.verdicts.iter().all(|v| v.values_equal)
    }
}

/// Compares convergent values of `cf` and its transform for `n = 1..=count`.
pub fn verify_invariance(
    cf: &ContinuedFraction,
    r: &ScalingSequence,
    count: usize,
) -> Result<InvarianceReport> {
    let transformed = apply_equivalence(cf, r)?;
    let lhs = convergents(cf, count)?;
    let rhs = convergents(&transformed, count)?;
    let verdicts = lhs
        .iter()
        .zip(&rhs)
        .map(|(x, y)| InvarianceVerdict {
            n: x.n,
            values_equal: x.value == y.value,
            pairs_equal: x.numerator == y.numerator && x.denominator == y.denominator,
        })
        .collect();
    Ok(InvarianceReport {
        transformed,
        verdicts,
    })
}

/// Leading coefficient of a sequence's tail, if it is a closed form.
pub fn tail_leading_coefficient(seq: &PiecewiseSequence) -> Option<Rational> {
    let f = seq.tail().rule.as_closed()?;
    let lead_num = f.numerator().leading().cloned().unwrap_or_else(Rational::zero);
    let lead_den = f.denominator().leading()?;
    Some(lead_num / lead_den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfengine::evaluate_backward;
    use crate::exactnum::rat;
    use crate::gausshyp::{gauss_cf, GaussParameters};
    use crate::polyseq::asymptotic_expand;

    fn kernel() -> ContinuedFraction {
        let p = GaussParameters::new(rat(1, 2), int(0), rat(1, 2), int(-1)).unwrap();
        gauss_cf(&p, 100).unwrap()
    }

    #[test]
    fn denominators_follow_progression() {
        let t = apply_equivalence(&kernel(), &ScalingSequence::linear_progression()).unwrap();
        let b: Vec<_> = (1..=5).map(|n| t.partial_denominator(n).unwrap()).collect();
        assert_eq!(b, vec![int(-1), int(-4), int(-7), int(-10), int(-13)]);
    }

    #[test]
    fn identity_scaling_reproduces_input() {
        let cf = kernel();
        let t = apply_equivalence(&cf, &ScalingSequence::identity()).unwrap();
        assert_eq!(t.a(), cf.a());
        assert_eq!(t.b(), cf.b());
        assert_eq!(t.b0(), cf.b0());
    }

    #[test]
    fn transformed_numerators() {
        let t = apply_equivalence(&kernel(), &ScalingSequence::linear_progression()).unwrap();
        assert_eq!(t.partial_numerator(1).unwrap(), int(-1));
        assert_eq!(t.partial_numerator(2).unwrap(), rat(-4, 3));
        assert_eq!(t.partial_numerator(3).unwrap(), rat(-112, 15));
        for n in 2..=200 {
            assert_eq!(t.partial_numerator(n).unwrap(), exact_tilde_numerator(n).unwrap());
        }
        // only a_1 departs from the closed form
        assert_eq!(t.a().pieces()[0].rule.as_constant(), Some(int(-1)));
        assert_eq!(t.a().tail().lo, 2);
        assert_eq!(t.b().pieces().len(), 1);
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(exact_tilde_numerator(2).unwrap(), rat(-4, 3));
        assert_eq!(exact_tilde_numerator(3).unwrap(), rat(-112, 15));
        assert_eq!(exact_tilde_numerator(4).unwrap(), int(-18));
        assert!(exact_tilde_numerator(1).is_err());
    }

    #[test]
    fn invariance_under_linear_progression() {
        let report = verify_invariance(&kernel(), &ScalingSequence::linear_progression(), 30).unwrap();
        assert_eq!(report.verdicts.len(), 30);
        assert!(report.all_equal());
    }

    #[test]
    fn identity_scaling_is_trivial() {
        let cf = kernel();
        let report = verify_invariance(&cf, &ScalingSequence::identity(), 20).unwrap();
        assert!(report.all_equal());
        assert!(report.verdicts.iter().all(|v| v.pairs_equal));
        for n in 1..=20 {
            assert_eq!(report.transformed.partial_numerator(n), cf.partial_numerator(n));
        }
    }

    #[test]
    fn constant_scaling_changes_pairs_only() {
        let r = ScalingSequence::new(
            PiecewiseSequence::new(
                0,
                vec![
                    Piece { lo: 0, hi: Some(0), rule: Rule::constant(int(1)) },
                    Piece { lo: 1, hi: None, rule: Rule::constant(int(2)) },
                ],
            )
            .unwrap(),
        )
        .unwrap();
        let report = verify_invariance(&kernel(), &r, 20).unwrap();
        assert!(report.all_equal());
        assert!(report.verdicts.iter().all(|v| !v.pairs_equal));
    }

    #[test]
    fn zero_scaling_factor_named() {
        // r_n = n - 3 vanishes at n = 3
        let seq = PiecewiseSequence::new(
            0,
            vec![
                Piece { lo: 0, hi: Some(0), rule: Rule::constant(int(1)) },
                Piece { lo: 1, hi: None, rule: Rule::Closed(Polynomial::from_ints(&[-3, 1]).into()) },
            ],
        )
        .unwrap();
        assert_eq!(ScalingSequence::new(seq), Err(Error::InvalidScaling { n: 3 }));
        let bad_head = PiecewiseSequence::constant(0, int(2));
        assert!(matches!(ScalingSequence::new(bad_head), Err(Error::Domain(_))));
    }

    #[test]
    fn leading_terms_differ_from_integer_numerators() {
        let t = apply_equivalence(&kernel(), &ScalingSequence::linear_progression()).unwrap();
        let tail = t.a().tail().rule.as_closed().unwrap().clone();
        let e = asymptotic_expand(&tail, 0).unwrap();
        assert_eq!(e.coefficients[0], rat(-9, 4));
        assert_eq!(tail_leading_coefficient(t.a()), Some(rat(-9, 4)));
        assert_ne!(e.coefficients[0], int(-2));
    }

    #[test]
    fn head_sign_flip_negates_value() {
        let t = apply_equivalence(&kernel(), &ScalingSequence::linear_progression()).unwrap();
        let flipped = with_head_numerator(&t, int(1)).unwrap();
        let v = evaluate_backward(&t, 2_000, 10).unwrap();
        let w = evaluate_backward(&flipped, 2_000, 10).unwrap();
        assert_eq!(w, -v);
    }
}
