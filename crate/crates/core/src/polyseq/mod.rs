//! Polynomials and rational functions in the index variable `n`, piecewise
//! coefficient sequences built from them, and exact asymptotic expansions.

mod asymptotic;
mod polynomial;
mod ratfun;
mod sequence;

pub use asymptotic::{asymptotic_expand, AsymptoticExpansion};
pub use polynomial::Polynomial;
pub use ratfun::{ratfun_multiply, shift_index, RationalFunction};
pub use sequence::{seq_eval, Piece, PiecewiseSequence, Rule, SequenceError};
