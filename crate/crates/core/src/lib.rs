//! Generalized continued fractions with polynomial and rational-function
//! coefficient sequences.
//!
//! The crate covers exact convergents, precision-targeted evaluation,
//! equivalence transformations, Gauss hypergeometric fractions and
//! Worpitzky-style convergence analysis, plus a small text format for
//! writing fractions down.

pub mod analysis;
pub mod cfengine;
pub mod dsl;
pub mod equivtrans;
mod error;
pub mod exactnum;
pub mod gausshyp;
pub mod polyseq;
pub mod presets;

pub use analysis::{analyze, AnalysisReport, Classification, Sigma};
pub use cfengine::{convergents, evaluate, ContinuedFraction, Convergent, Evaluation};
pub use error::{Error, Result};
pub use exactnum::{pi_quarter, HighPrecisionDecimal, Rational};
pub use polyseq::{PiecewiseSequence, Polynomial, RationalFunction};
