//! Convergence analysis: Worpitzky parameters `ρ_n = a_n / (b_n b_{n−1})`,
//! their symbolic limit, disk classification, the geometric convergence
//! factor and empirical error ratios, assembled into an [`AnalysisReport`].

use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::cfengine::{empirical_error_ratios, error_sequence, ContinuedFraction};
use crate::error::{Error, Result};
use crate::exactnum::{
    format_scientific, int, pow10, rat, HighPrecisionDecimal, Rational, GUARD_DIGITS,
};
use crate::polyseq::{asymptotic_expand, AsymptoticExpansion, RationalFunction};

/// Position of the limit `L` relative to the disk `|ρ| ≤ 1/4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Interior,
    Boundary,
    Exterior,
    Unknown,
}

impl Classification {
    pub fn of(limit: Option<&Rational>) -> Self {
        match limit {
            None => Classification::Unknown,
            Some(l) => match l.abs().cmp(&rat(1, 4)) {
                std::cmp::Ordering::Less => Classification::Interior,
                std::cmp::Ordering::Equal => Classification::Boundary,
                std::cmp::Ordering::Greater => Classification::Exterior,
            },
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Interior => "interior",
            Classification::Boundary => "boundary",
            Classification::Exterior => "exterior",
            Classification::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Convergence factor, exact when `1 − 4|L|` is a rational square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sigma {
    Exact(Rational),
    Approx(HighPrecisionDecimal),
}

impl Sigma {
    pub fn to_rational(&self) -> Rational {
        match self {
            Sigma::Exact(r) => r.clone(),
            Sigma::Approx(d) => d.to_rational(),
        }
    }
}

impl fmt::Display for Sigma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sigma::Exact(r) => write!(f, "{r}"),
            Sigma::Approx(d) => write!(f, "{d}"),
        }
    }
}

/// `ρ_n` for `n = 2..=count`; `None` where `b_n b_{n−1} = 0`.
pub fn worpitzky_parameters(
    cf: &ContinuedFraction,
    count: usize,
) -> Result<Vec<(usize, Option<Rational>)>> {
    let mut out = Vec::with_capacity(count.saturating_sub(1));
    if count < 2 {
        return Ok(out);
    }
    let mut b_prev = cf.partial_denominator(1)?;
    for n in 2..=count {
        let b = cf.partial_denominator(n as i64)?;
        let den = &b * &b_prev;
        let rho = (!den.is_zero()).then(|| cf.partial_numerator(n as i64)).transpose()?;
        out.push((n, rho.map(|a| a / den)));
        b_prev = b;
    }
    Ok(out)
}

/// `ρ(n) = a(n) / (b(n) b(n−1))` from the tail rules, if both are closed forms.
pub fn rho_closed_form(cf: &ContinuedFraction) -> Option<RationalFunction> {
    let a = cf.a().tail().rule.as_closed()?;
    let b = cf.b().tail().rule.as_closed()?;
    a.div(&b.mul(&b.shift(-1))).ok()
}

/// `L = lim ρ_n` from the closed form: ratio of leading coefficients when
/// degrees match, 0 when the numerator degree is lower, absent when higher.
pub fn symbolic_limit(cf: &ContinuedFraction) -> Option<(Rational, RationalFunction)> {
    let rho = rho_closed_form(cf)?;
    let limit = limit_at_infinity(&rho)?;
    Some((limit, rho))
}

fn limit_at_infinity(f: &RationalFunction) -> Option<Rational> {
    match f.degree() {
        None => Some(Rational::zero()),
        Some(d) if d < 0 => Some(Rational::zero()),
        Some(0) => Some(f.numerator().leading()? / f.denominator().leading()?),
        Some(_) => None,
    }
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Rational::new(n, d))
}

/// `σ = (1 − √(1−4|L|)) / (1 + √(1−4|L|))`, defined for `|L| ≤ 1/4`.
pub fn convergence_factor(limit: &Rational) -> Result<Sigma> {
    let disc = int(1) - int(4) * limit.abs();
    if disc.is_negative() {
        return Err(Error::OutOfDisk(limit.abs().to_string()));
    }
    if let Some(root) = rational_sqrt(&disc) {
        return Ok(Sigma::Exact((int(1) - &root) / (int(1) + &root)));
    }
    let digits = 12;
    let work = digits + GUARD_DIGITS;
    let scaled = disc * Rational::from_integer(pow10(2 * work));
    let root = Rational::new(scaled.to_integer().sqrt(), pow10(work));
    let sigma = (int(1) - &root) / (int(1) + &root);
    Ok(Sigma::Approx(HighPrecisionDecimal::from_rational(&sigma, digits)))
}

/// `k · (−log₁₀ σ)` to 6 significant digits.
pub fn digits_per_iterations(sigma: &Sigma, k: u32) -> Result<HighPrecisionDecimal> {
    let s = sigma.to_rational();
    if !(s > Rational::zero() && s < Rational::one()) {
        return Err(Error::Domain(format!("sigma = {sigma} is not in (0, 1)")));
    }
    let x = s.to_f64().ok_or_else(|| Error::Domain("sigma not representable".into()))?;
    let value = k as f64 * -x.log10();
    let exact = Rational::from_float(value).expect("finite");
    Ok(HighPrecisionDecimal::round_significant(&exact, 6))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalErrors {
    pub n: Vec<usize>,
    pub errors: Vec<Option<Rational>>,
    pub ratios: Vec<HighPrecisionDecimal>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisReport {
    pub label: String,
    pub rho_samples: Vec<(usize, Option<Rational>)>,
    pub rho_closed_form: Option<RationalFunction>,
    pub limit: Option<Rational>,
    pub classification: Classification,
    pub sigma: Option<Sigma>,
    pub digits_per_10: Option<HighPrecisionDecimal>,
    pub rho_expansion: Option<AsymptoticExpansion>,
    pub empirical: Option<EmpiricalErrors>,
    pub flags: Vec<String>,
}

/// Order down to which `ρ_n` is expanded in reports.
pub const RHO_EXPANSION_ORDER: i64 = -2;

/// Relative gap between the last empirical ratio and σ above which a flag is raised.
const RATIO_GAP_TOLERANCE: (i64, i64) = (1, 20);

pub fn analyze(
    cf: &ContinuedFraction,
    samples: usize,
    reference: Option<&HighPrecisionDecimal>,
) -> Result<AnalysisReport> {
    let mut flags = Vec::new();
    let rho_samples = worpitzky_parameters(cf, samples)?;
    let rho_closed_form = rho_closed_form(cf);
    if rho_closed_form.is_none() {
        flags.push("tail rules are not a single closed form; no symbolic limit".to_string());
    }
    let limit = rho_closed_form.as_ref().and_then(limit_at_infinity);
    if rho_closed_form.is_some() && limit.is_none() {
        flags.push("rho_n is unbounded; the Worpitzky criterion does not apply".to_string());
    }
    let classification = Classification::of(limit.as_ref());
    let sigma = match &limit {
        Some(l) if classification != Classification::Exterior => Some(convergence_factor(l)?),
        _ => None,
    };
    if classification == Classification::Boundary {
        flags.push(
            "Worpitzky criterion inconclusive at boundary (|L| = 1/4); sigma = 1, no geometric rate"
                .to_string(),
        );
    }
    if classification == Classification::Exterior {
        flags.push("limit lies outside the Worpitzky disk; sigma undefined".to_string());
    }
    let digits_per_10 = sigma
        .as_ref()
        .and_then(|s| digits_per_iterations(s, 10).ok());
    let rho_expansion = match &rho_closed_form {
        Some(f) if !f.is_zero() && f.degree().is_some_and(|d| d >= RHO_EXPANSION_ORDER) => {
            Some(asymptotic_expand(f, RHO_EXPANSION_ORDER)?)
        }
        _ => None,
    };
    let empirical = match reference {
        Some(r) => {
            let entries = error_sequence(cf, r, samples)?;
            let errors: Vec<Option<Rational>> = entries.iter().map(|e| e.abs_error.clone()).collect();
            let ratios = empirical_error_ratios(&errors);
            if let (Some(last), Some(s)) = (ratios.last(), &sigma) {
                let s = s.to_rational();
                let gap = (last.to_rational() - &s).abs();
                if !s.is_zero() && gap > &s * rat(RATIO_GAP_TOLERANCE.0, RATIO_GAP_TOLERANCE.1) {
                    flags.push(format!(
                        "empirical error ratio {} at n = {} differs from sigma = {}",
                        last.to_trimmed_string(),
                        samples,
                        s
                    ));
                }
            }
            Some(EmpiricalErrors {
                n: entries.iter().map(|e| e.n).collect(),
                errors,
                ratios,
            })
        }
        None => None,
    };
    Ok(AnalysisReport {
        label: cf.label().to_string(),
        rho_samples,
        rho_closed_form,
        limit,
        classification,
        sigma,
        digits_per_10,
        rho_expansion,
        empirical,
        flags,
    })
}

impl AnalysisReport {
    /// Compares the computed `ρ_n` expansion with externally stated
    /// coefficients (from `n^0` downwards) and flags every mismatch.
    /// Returns the indices that disagree.
    pub fn compare_rho_expansion(&mut self, stated: &[Rational]) -> Vec<usize> {
        let Some(e) = &self.rho_expansion else {
            self.flags
                .push("no rho expansion available to compare with stated coefficients".into());
            return Vec::new();
        };
        let mut mismatches = Vec::new();
        for (i, s) in stated.iter().enumerate() {
            let power = e.top_degree - i as i64;
            let computed = e.coefficient(power);
            if &computed != s {
                mismatches.push(i);
                self.flags.push(format!(
                    "rho expansion coefficient of n^{power}: computed {computed}, stated {s} (unreproduced)"
                ));
            }
        }
        mismatches
    }

    pub fn to_json(&self) -> Value {
        let rational = |r: &Rational| Value::String(r.to_string());
        let opt = |r: &Option<Rational>| r.as_ref().map_or(Value::Null, rational);
        json!({
            "label": self.label,
            "L": opt(&self.limit),
            "classification": self.classification.as_str(),
            "sigma": self.sigma.as_ref().map_or(Value::Null, |s| Value::String(s.to_string())),
            "digits_per_10": self
                .digits_per_10
                .as_ref()
                .map_or(Value::Null, |d| Value::String(d.to_trimmed_string())),
            "rho_closed_form": self
                .rho_closed_form
                .as_ref()
                .map_or(Value::Null, |f| Value::String(f.to_string())),
            "rho_samples": self
                .rho_samples
                .iter()
                .map(|(n, r)| json!({ "n": n, "rho": opt(r) }))
                .collect::<Vec<_>>(),
            "rho_expansion": self.rho_expansion.as_ref().map_or(Value::Null, |e| json!({
                "top_degree": e.top_degree,
                "coefficients": e.coefficients.iter().map(rational).collect::<Vec<_>>(),
            })),
            "empirical": self.empirical.as_ref().map_or(Value::Null, |emp| json!({
                "n": emp.n,
                "error": emp
                    .errors
                    .iter()
                    .map(|e| e.as_ref().map_or(Value::Null, |x| Value::String(format_scientific(x, 6))))
                    .collect::<Vec<_>>(),
                "ratio": emp.ratios.iter().map(|r| r.to_trimmed_string()).collect::<Vec<_>>(),
            })),
            "flags": self.flags,
        })
    }
}

/// Exact `|ρ_n|` monotonicity and bound check over `from..=to`.
pub fn rho_strictly_increasing_below(
    cf: &ContinuedFraction,
    from: usize,
    to: usize,
    bound: &Rational,
) -> Result<bool> {
    let samples = worpitzky_parameters(cf, to)?;
    let mut prev: Option<Rational> = None;
    for (_, rho) in samples.into_iter().filter(|(n, _)| *n >= from) {
        let Some(r) = rho else { return Ok(false) };
        let mag = r.abs();
        if &mag >= bound || prev.as_ref().is_some_and(|p| &mag <= p) {
            return Ok(false);
        }
        prev = Some(mag);
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyseq::PiecewiseSequence;
    use crate::exactnum::pi_quarter;
    use crate::presets;

    fn rho_at(samples: &[(usize, Option<Rational>)], n: usize) -> Rational {
        samples.iter().find(|(k, _)| *k == n).unwrap().1.clone().unwrap()
    }

    #[test]
    fn sampled_rho_values() {
        let s = worpitzky_parameters(&presets::conjecture_pi4(), 5).unwrap();
        assert_eq!(rho_at(&s, 2), rat(1, 4));
        assert_eq!(rho_at(&s, 3), rat(-1, 14));
        assert_eq!(rho_at(&s, 5), rat(-2, 13));
        assert!(worpitzky_parameters(&presets::conjecture_pi4(), 1).unwrap().is_empty());
    }

    #[test]
    fn limits_of_presets() {
        let (l, _) = symbolic_limit(&presets::conjecture_pi4()).unwrap();
        assert_eq!(l, rat(-2, 9));
        let (l, _) = symbolic_limit(&presets::exact_transformed()).unwrap();
        assert_eq!(l, rat(-1, 4));
        let (l, _) = symbolic_limit(&presets::sqrt2()).unwrap();
        assert_eq!(l, rat(1, 4));
    }

    #[test]
    fn classification_of_limits() {
        assert_eq!(Classification::of(Some(&rat(-2, 9))), Classification::Interior);
        assert_eq!(Classification::of(Some(&rat(1, 4))), Classification::Boundary);
        assert_eq!(Classification::of(Some(&rat(-1, 3))), Classification::Exterior);
        assert_eq!(Classification::of(None), Classification::Unknown);
    }

    #[test]
    fn convergence_factor_values() {
        assert_eq!(convergence_factor(&rat(-2, 9)).unwrap().to_rational(), rat(1, 2));
        assert_eq!(convergence_factor(&rat(0, 1)).unwrap().to_rational(), rat(0, 1));
        assert_eq!(convergence_factor(&rat(-1, 4)).unwrap().to_rational(), rat(1, 1));
        assert!(matches!(convergence_factor(&rat(3, 10)), Err(Error::OutOfDisk(_))));
        match convergence_factor(&rat(1, 5)).unwrap() {
            Sigma::Approx(d) => {
                // (1 - sqrt(1/5)) / (1 + sqrt(1/5)) = 0.381966011250...
                assert_eq!(d.to_string(), "0.381966011250");
            }
            other => panic!("expected decimal sigma, got {other}"),
        }
    }

    #[test]
    fn digits_per_iteration_values() {
        let half = Sigma::Exact(rat(1, 2));
        assert_eq!(digits_per_iterations(&half, 10).unwrap().to_trimmed_string(), "3.0103");
        assert_eq!(digits_per_iterations(&half, 20).unwrap().to_trimmed_string(), "6.0206");
        let tenth = Sigma::Exact(rat(1, 10));
        assert_eq!(digits_per_iterations(&tenth, 1).unwrap().to_trimmed_string(), "1.0");
        assert!(digits_per_iterations(&Sigma::Exact(rat(1, 1)), 10).is_err());
        assert!(digits_per_iterations(&Sigma::Exact(rat(0, 1)), 10).is_err());
    }

    #[test]
    fn rho_magnitude_increases_towards_limit() {
        let cf = presets::conjecture_pi4();
        assert!(rho_strictly_increasing_below(&cf, 3, 10_000, &rat(2, 9)).unwrap());
        assert!(!rho_strictly_increasing_below(&cf, 2, 10, &rat(2, 9)).unwrap());
    }

    #[test]
    fn unbounded_rho_is_unknown() {
        let a = PiecewiseSequence::closed(1, RationalFunction::var().pow(2));
        let b = PiecewiseSequence::constant(1, int(1));
        let cf = ContinuedFraction::new(int(0), a, b, "squares").unwrap();
        let r = analyze(&cf, 20, None).unwrap();
        assert_eq!(r.classification, Classification::Unknown);
        assert!(r.limit.is_none() && r.sigma.is_none());
        assert!(r.flags.iter().any(|f| f.contains("unbounded")));
    }

    #[test]
    fn boundary_is_flagged() {
        let r = analyze(&presets::exact_transformed(), 20, None).unwrap();
        assert_eq!(r.classification, Classification::Boundary);
        assert_eq!(r.sigma.as_ref().unwrap().to_rational(), rat(1, 1));
        assert!(r.digits_per_10.is_none());
        assert!(r.flags.iter().any(|f| f.contains("inconclusive")));
    }

    #[test]
    fn conjecture_report() {
        let reference = -pi_quarter(40).unwrap();
        let cf = presets::conjecture_pi4();
        let mut r = analyze(&cf, 40, Some(&reference)).unwrap();
        assert_eq!(r.limit, Some(rat(-2, 9)));
        assert_eq!(r.classification, Classification::Interior);
        assert_eq!(r.digits_per_10.as_ref().unwrap().to_trimmed_string(), "3.0103");
        let e = r.rho_expansion.clone().unwrap();
        assert_eq!(e.coefficient(0), rat(-2, 9));
        assert_eq!(e.coefficient(-1), rat(7, 27));
        assert_eq!(e.coefficient(-2), rat(8, 27));
        let emp = r.empirical.as_ref().unwrap();
        assert_eq!(emp.n.len(), 40);
        // ratios approach 1/2 slowly: 0.459 at n = 40
        assert_eq!(r.flags.len(), 1, "{:?}", r.flags);
        assert!(r.flags[0].starts_with("empirical error ratio 0.459"));

        let stated = [rat(-2, 9), rat(7, 27), rat(31, 81)];
        assert_eq!(r.compare_rho_expansion(&stated), vec![2]);
        assert!(r.flags.iter().any(|f| f.contains("31/81") && f.contains("unreproduced")));
    }

    #[test]
    fn report_json_is_deterministic() {
        let reference = -pi_quarter(30).unwrap();
        let cf = presets::conjecture_pi4();
        let a = analyze(&cf, 12, Some(&reference)).unwrap().to_json();
        let b = analyze(&cf, 12, Some(&reference)).unwrap().to_json();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        for key in [
            "label", "L", "classification", "sigma", "digits_per_10", "rho_closed_form",
            "rho_samples", "rho_expansion", "empirical", "flags",
        ] {
            assert!(a.get(key).is_some(), "missing {key}");
        }
        assert_eq!(a["L"], "-2/9");
        assert_eq!(a["sigma"], "1/2");
        assert_eq!(a["rho_samples"][0]["rho"], "1/4");
    }
}
