//! Detectors for inconsistent probability methods.
//!
//! These report values that are *not* probabilities (a chain ratio above 1,
//! two "complementary" sides summing past 1), so results are plain `f64`
//! inside a [`DiagnosticReport`] and never flow back into [`Probability`].

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::combinators::{bayes_implied, cmpe_add, cohen_binary_combine};
use crate::error::CombineError;
use crate::prob::Probability;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticStep {
    pub step: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factor: Option<f64>,
    pub value: f64,
}

impl DiagnosticStep {
    fn new(step: &str, value: f64) -> Self {
        DiagnosticStep {
            step: step.to_string(),
            index: None,
            factor: None,
            value,
        }
    }
}

/// Outcome of a check. `valid ⇔ raw_value ≤ 1` and `overflow_index` is set
/// exactly when the report is invalid and the check is a chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticReport {
    pub raw_value: f64,
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub overflow_index: Option<usize>,
    pub steps: Vec<DiagnosticStep>,
}

/// Reported value of an exact quantity, nudged above 1 if rounding to `f64`
/// would otherwise hide an excess.
fn reported(exact: &BigRational) -> (f64, bool) {
    let valid = *exact <= BigRational::one();
    let mut value = exact.to_f64().unwrap_or(f64::INFINITY);
    if !valid && value <= 1.0 {
        value = 1.0f64.next_up();
    }
    (value, valid)
}

/// Broad's chain: the hypothesis's prior divided by the product of the
/// probabilities of its verified consequences, evaluated after each one.
///
/// Exceeding 1 is the finding, not an error; `overflow_index` is the 1-based
/// position of the first consequence that pushes the ratio strictly above 1.
pub fn broad_chain(
    prior: &Probability,
    consequence_probs: &[Probability],
) -> Result<DiagnosticReport, CombineError> {
    if let Some(index) = consequence_probs.iter().position(Probability::is_zero) {
        return Err(CombineError::ZeroConsequence { index });
    }
    let mut ratio = prior.to_rational();
    let mut denominator = BigRational::one();
    let mut overflow_index = None;
    let mut steps = vec![DiagnosticStep::new("prior", prior.value())];
    for (i, c) in consequence_probs.iter().enumerate() {
        let c = c.to_rational();
        denominator *= &c;
        ratio /= &c;
        let (value, valid) = reported(&ratio);
        if !valid && overflow_index.is_none() {
            overflow_index = Some(i + 1);
        }
        steps.push(DiagnosticStep {
            step: "consequence".to_string(),
            index: Some(i + 1),
            factor: c.to_f64(),
            value,
        });
    }
    steps.push(DiagnosticStep::new(
        "denominator",
        denominator.to_f64().unwrap_or(0.0),
    ));
    let (raw_value, valid) = reported(&ratio);
    Ok(DiagnosticReport {
        raw_value,
        valid,
        overflow_index,
        steps,
    })
}

/// Binary-hypothesis complementarity check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CohenReport {
    /// Side the testimonies speak for.
    pub testified: Probability,
    /// The opposite side.
    pub opposite: Probability,
    /// `|testified + opposite − 1|`.
    pub defect: f64,
    pub report: DiagnosticReport,
}

/// Computes both sides of a binary hypothesis from testimonies for one side.
///
/// With `treat_both_sides_as_cmpe` the testimonies and their complements are
/// both cMPE-added, which double counts; the defect measures by how much the
/// sides fail to be complementary. Otherwise the correct rule is applied and
/// the defect is zero.
pub fn cohen_complementarity_check(
    testimonies: &[Probability],
    treat_both_sides_as_cmpe: bool,
) -> Result<CohenReport, CombineError> {
    let complements: Vec<Probability> = testimonies.iter().map(Probability::complement).collect();
    let (testified, opposite) = if treat_both_sides_as_cmpe {
        (cmpe_add(testimonies)?, cmpe_add(&complements)?)
    } else {
        let verdict = cohen_binary_combine(testimonies)?;
        (verdict.disfavored, verdict.favored)
    };
    let sum = testified.to_rational() + opposite.to_rational();
    let defect = (&sum - BigRational::one())
        .abs()
        .to_f64()
        .unwrap_or(f64::NAN);
    let (raw_value, valid) = reported(&sum);
    let steps = vec![
        DiagnosticStep::new("testified side", testified.value()),
        DiagnosticStep::new("opposite side", opposite.value()),
        DiagnosticStep::new("defect", defect),
    ];
    Ok(CohenReport {
        testified,
        opposite,
        defect,
        report: DiagnosticReport {
            raw_value,
            valid,
            overflow_index: None,
            steps,
        },
    })
}

/// The two readings of evidence implied by a hypothesis, side by side.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImpliedReadings {
    /// Evidence treated as weight-bearing: cMPE of prior and support.
    pub cmpe_reading: Probability,
    /// Evidence treated as extension: `P(H) / P(E)`.
    pub bayes_reading: Probability,
}

pub fn implied_evidence_comparison(
    prior: &Probability,
    weight_bearing_support: &Probability,
    evidence_total: &Probability,
) -> Result<ImpliedReadings, CombineError> {
    Ok(ImpliedReadings {
        cmpe_reading: cmpe_add(&[prior.clone(), weight_bearing_support.clone()])?,
        bayes_reading: bayes_implied(prior, evidence_total)?,
    })
}
