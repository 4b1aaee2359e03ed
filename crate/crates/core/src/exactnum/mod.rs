//! Exact rational arithmetic, fixed-scale decimals and the independent π/4 oracle.
//!
//! Everything in the exact layer is built on [`Rational`], an arbitrary-precision
//! fraction that is always stored reduced with a positive denominator.
//! Decimal output uses round-to-nearest with ties away from zero.

mod decimal;
mod pi;
mod rational;

pub use decimal::{format_scientific, hp_from_rational, HighPrecisionDecimal};
pub use pi::{arctan_inverse, cross_check, gauss_pi_quarter, machin_pi_quarter, pi_quarter, GUARD_DIGITS};
pub use rational::{
    abs_diff, floor_log10, int, pow10, rat, rat_normalize, round_half_away, Rational,
};
