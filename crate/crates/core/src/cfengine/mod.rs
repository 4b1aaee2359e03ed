//! Generalized continued fractions `b0 + K(a_n / b_n)` and their evaluation.
//!
//! Convergents are indexed so that `f_n` contains `n` partial quotients:
//! `f_1 = b0 + a_1/b_1`.

mod convergent;
mod errors;
mod evaluate;
mod fraction;

pub use convergent::{convergents, Convergent, Convergents};
pub use errors::{empirical_error_ratios, error_sequence, ErrorEntry};
pub use evaluate::{evaluate, evaluate_backward, Evaluation};
pub use fraction::{ContinuedFraction, VERIFY_LIMIT};
