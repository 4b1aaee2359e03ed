//! Shared workloads for the criterion benchmarks.

use polycf::dsl::parse_cf_spec;
use polycf::ContinuedFraction;

/// A degree-4 numerator sequence with rational coefficients, heavier than
/// the presets.
pub const RATIONAL_SPEC: &str =
    "b0 = 1/2; a(n) = { 1 for n in 1..1; -(n^2 - 1)/(4*n^2 - 1) for n >= 2 }; b(n) = 2*n + 1";

pub fn rational_fraction() -> ContinuedFraction {
    parse_cf_spec(RATIONAL_SPEC).expect("bench spec parses")
}
