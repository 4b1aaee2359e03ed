use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::polyseq::PiecewiseSequence;

/// Indices up to which partial numerators are checked for zeros and both
/// sequences for poles when a fraction is built.
pub const VERIFY_LIMIT: i64 = 10_000;

/// `b0 + a_1/(b_1 + a_2/(b_2 + …))` with both sequences indexed from 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFraction {
    b0: Rational,
    a: PiecewiseSequence,
    b: PiecewiseSequence,
    label: String,
}

impl ContinuedFraction {
    /// Validates the sequences: both start at 1, neither has a pole and no
    /// partial numerator vanishes for `n ≤ VERIFY_LIMIT`.
    pub fn new(
        b0: Rational,
        a: PiecewiseSequence,
        b: PiecewiseSequence,
        label: impl Into<String>,
    ) -> Result<Self> {
        for (name, seq) in [("a", &a), ("b", &b)] {
            if seq.start() != 1 {
                return Err(Error::Domain(format!(
                    "sequence {name} must start at n = 1, not {}",
                    seq.start()
                )));
            }
            if let Some(&n) = seq.poles_up_to(VERIFY_LIMIT).first() {
                return Err(Error::Pole { n });
            }
        }
        if let Some(&n) = a.zeros_up_to(VERIFY_LIMIT).first() {
            return Err(Error::ZeroPartialNumerator { n });
        }
        Ok(Self {
            b0,
            a,
            b,
            label: label.into(),
        })
    }

    pub fn b0(&self) -> &Rational {
        &self.b0
    }

    pub fn a(&self) -> &PiecewiseSequence {
        &self.a
    }

    pub fn b(&self) -> &PiecewiseSequence {
        &self.b
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn partial_numerator(&self, n: i64) -> Result<Rational> {
        self.a.eval(n)
    }

    pub fn partial_denominator(&self, n: i64) -> Result<Rational> {
        self.b.eval(n)
    }
}
