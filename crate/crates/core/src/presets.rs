//! Built-in fractions and reference constants.

use std::str::FromStr;

use crate::cfengine::ContinuedFraction;
use crate::dsl::parse_cf_spec_labeled;
use crate::equivtrans::{apply_equivalence, ScalingSequence};
use crate::error::{Error, Result};
use crate::exactnum::{int, pi_quarter, rat, HighPrecisionDecimal, Rational};
use crate::gausshyp::{gauss_cf, GaussParameters};

/// The integer-coefficient fraction for −π/4.
pub const CONJECTURE_SPEC: &str =
    "b0 = 0; a(n) = { 1 for n in 1..2; -(n-1)*(2*n-5) for n >= 3 }; b(n) = -(3*n-2)";
pub const SQRT2_SPEC: &str = "b0 = 1; a(n) = 1; b(n) = 2";
pub const OSCILLATING_SPEC: &str = "b0 = 0; a(n) = 1; b(n) = 0";

pub const PRESET_NAMES: &[&str] = &[
    "conjecture-pi4",
    "gauss-kernel",
    "exact-transformed",
    "sqrt2",
    "oscillating",
];

/// Default evaluation depth for the slowly converging boundary kernels.
pub const BOUNDARY_MAX_DEPTH: usize = 100_000;
pub const DEFAULT_MAX_DEPTH: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReferenceConstant {
    PiOver4,
    MinusPiOver4,
    Custom(HighPrecisionDecimal),
}

impl ReferenceConstant {
    pub fn value(&self, digits: u32) -> Result<HighPrecisionDecimal> {
        match self {
            ReferenceConstant::PiOver4 => pi_quarter(digits),
            ReferenceConstant::MinusPiOver4 => Ok(-pi_quarter(digits)?),
            ReferenceConstant::Custom(d) => Ok(d.clone()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            ReferenceConstant::PiOver4 => "pi_over_4".into(),
            ReferenceConstant::MinusPiOver4 => "minus_pi_over_4".into(),
            ReferenceConstant::Custom(d) => d.to_string(),
        }
    }
}

impl FromStr for ReferenceConstant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pi_over_4" => Ok(ReferenceConstant::PiOver4),
            "minus_pi_over_4" => Ok(ReferenceConstant::MinusPiOver4),
            other => Ok(ReferenceConstant::Custom(other.parse()?)),
        }
    }
}

/// A row of a previously published convergence table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublishedRow {
    pub n: usize,
    pub value: &'static str,
    pub abs_error: &'static str,
    pub digits: u32,
}

/// Values stated for a preset elsewhere, kept for side-by-side comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublishedValues {
    /// `ρ_n` expansion coefficients from `n^0` downwards.
    pub rho_expansion: Vec<Rational>,
    pub table: Vec<PublishedRow>,
}

#[derive(Debug, Clone)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub cf: ContinuedFraction,
    pub reference: Option<ReferenceConstant>,
    pub max_depth: usize,
    pub published: Option<PublishedValues>,
}

pub fn conjecture_pi4() -> ContinuedFraction {
    parse_cf_spec_labeled(CONJECTURE_SPEC, "conjecture-pi4").expect("static spec parses")
}

pub fn gauss_kernel_params() -> GaussParameters {
    GaussParameters::new(rat(1, 2), int(0), rat(1, 2), int(-1)).expect("valid parameters")
}

pub fn gauss_kernel() -> ContinuedFraction {
    gauss_cf(&gauss_kernel_params(), 100)
        .expect("kernel builds")
        .with_label("gauss-kernel")
}

pub fn exact_transformed() -> ContinuedFraction {
    apply_equivalence(&gauss_kernel(), &ScalingSequence::linear_progression())
        .expect("scaling is valid")
        .with_label("exact-transformed")
}

pub fn sqrt2() -> ContinuedFraction {
    parse_cf_spec_labeled(SQRT2_SPEC, "sqrt2").expect("static spec parses")
}

pub fn oscillating() -> ContinuedFraction {
    parse_cf_spec_labeled(OSCILLATING_SPEC, "oscillating").expect("static spec parses")
}

fn conjecture_published() -> PublishedValues {
    PublishedValues {
        rho_expansion: vec![rat(-2, 9), rat(7, 27), rat(31, 81)],
        table: vec![
            PublishedRow { n: 5, value: "-0.7854938271", abs_error: "9.56e-5", digits: 4 },
            PublishedRow { n: 10, value: "-0.7853982071", abs_error: "4.37e-8", digits: 7 },
            PublishedRow { n: 15, value: "-0.7853981634", abs_error: "2.01e-11", digits: 10 },
        ],
    }
}

pub fn preset(name: &str) -> Result<Preset> {
    let p = match name {
        "conjecture-pi4" => Preset {
            name: "conjecture-pi4",
            description: "integer-coefficient fraction converging to -pi/4",
            cf: conjecture_pi4(),
            reference: Some(ReferenceConstant::MinusPiOver4),
            max_depth: DEFAULT_MAX_DEPTH,
            published: Some(conjecture_published()),
        },
        "gauss-kernel" => Preset {
            name: "gauss-kernel",
            description: "Gauss fraction for 2F1(1/2,1;3/2;z)/2F1(1/2,0;1/2;z) with z = -1, a_{n+1} = d_n z",
            cf: gauss_kernel(),
            reference: Some(ReferenceConstant::PiOver4),
            max_depth: BOUNDARY_MAX_DEPTH,
            published: None,
        },
        "exact-transformed" => Preset {
            name: "exact-transformed",
            description: "gauss-kernel rescaled by r_n = -(3n-2); rational numerators",
            cf: exact_transformed(),
            reference: Some(ReferenceConstant::PiOver4),
            max_depth: BOUNDARY_MAX_DEPTH,
            published: None,
        },
        "sqrt2" => Preset {
            name: "sqrt2",
            description: "1 + 1/(2 + 1/(2 + ...)) = sqrt(2)",
            cf: sqrt2(),
            reference: None,
            max_depth: DEFAULT_MAX_DEPTH,
            published: None,
        },
        "oscillating" => Preset {
            name: "oscillating",
            description: "1/(0 + 1/(0 + ...)); convergents alternate between undefined and 0",
            cf: oscillating(),
            reference: None,
            max_depth: DEFAULT_MAX_DEPTH,
            published: None,
        },
        other => {
            return Err(Error::Domain(format!(
                "unknown preset {other:?}; available: {}",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{cf_to_dsl, parse_cf_spec};

    #[test]
    fn every_preset_builds_and_roundtrips() {
        for name in PRESET_NAMES {
            let p = preset(name).unwrap();
            assert_eq!(p.name, *name);
            let printed = cf_to_dsl(&p.cf);
            let reparsed = parse_cf_spec(&printed).unwrap();
            assert_eq!(reparsed.a(), p.cf.a(), "{name}");
            assert_eq!(reparsed.b(), p.cf.b(), "{name}");
            assert_eq!(reparsed.b0(), p.cf.b0(), "{name}");
        }
        assert!(preset("nope").is_err());
    }

    #[test]
    fn reference_parsing() {
        assert_eq!("pi_over_4".parse::<ReferenceConstant>().unwrap(), ReferenceConstant::PiOver4);
        let c: ReferenceConstant = "1.5".parse().unwrap();
        assert_eq!(c.value(5).unwrap().to_string(), "1.5");
        assert!("pi".parse::<ReferenceConstant>().is_err());
        assert!(ReferenceConstant::MinusPiOver4.value(3).unwrap().is_negative());
    }
}
