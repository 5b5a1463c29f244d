//! Combination operators: non-linear addition (cMPE) and subtraction (DPE),
//! the error product (MPE), Bayes in its simple, partitioned and implied forms,
//! Laplace succession, support transfer and the binary (Cohen) rule.
//!
//! Every operator runs in the [`common_mode`] of its operands.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::CombineError;
use crate::prob::{
    common_mode, complement_product, log1mexp, log_add_exp, log_sum_exp, product, Probability,
    RepresentationMode,
};

/// Inputs below this are multiplied in log space even in floating mode.
pub const TINY_INPUT: f64 = 1e-6;

/// Absolute slack for checking that exhaustive priors sum to 1 outside rational mode.
pub const PARTITION_TOLERANCE: f64 = 1e-9;

// relative slack absorbing rounding in floating/log DPE before a result counts as negative
const ROUNDING_SLACK: f64 = 8.0 * f64::EPSILON;

/// Support a carrier event confers: `carrier_prior × transfer`.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportContribution {
    pub carrier_prior: Probability,
    pub transfer: Probability,
}

impl SupportContribution {
    pub fn new(carrier_prior: Probability, transfer: Probability) -> Self {
        Self {
            carrier_prior,
            transfer,
        }
    }

    pub fn conferred(&self) -> Probability {
        product(&[self.carrier_prior.clone(), self.transfer.clone()]).expect("two operands")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BayesAlternative {
    pub prior: Probability,
    pub likelihood: Probability,
}

impl BayesAlternative {
    pub fn new(prior: Probability, likelihood: Probability) -> Self {
        Self { prior, likelihood }
    }
}

/// Whether a list of alternatives claims to cover the whole hypothesis space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Partition {
    Exhaustive,
    Partial,
}

/// Both sides of a binary hypothesis after combining testimonies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinaryVerdict {
    pub favored: Probability,
    pub disfavored: Probability,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePoint {
    pub x: Probability,
    pub y: Probability,
}

/// Non-linear addition: `1 − Π(1 − pᵢ)`.
///
/// Never exceeds 1, never falls below the largest operand, and reaches 1 only
/// when some operand is 1.
pub fn cmpe_add(ps: &[Probability]) -> Result<Probability, CombineError> {
    if ps.is_empty() {
        return Err(CombineError::EmptyInput {
            operation: "cmpe_add",
        });
    }
    let sum = complement_product(ps)?.complement();
    if sum.mode() == RepresentationMode::Floating {
        let floor = ps.iter().map(Probability::value).fold(0.0, f64::max);
        return Ok(Probability::new(sum.value().max(floor))?);
    }
    Ok(sum)
}

/// Non-linear subtraction: `1 − (1 − minuend) / Π(1 − subtrahendᵢ)`.
///
/// Exact inverse of [`cmpe_add`]: `dpe_sub(cmpe_add([a, b]), [b]) == a`.
pub fn dpe_sub(
    minuend: &Probability,
    subtrahends: &[Probability],
) -> Result<Probability, CombineError> {
    if let Some(index) = subtrahends.iter().position(Probability::is_one) {
        return Err(CombineError::DivisionByZeroComplement { index });
    }
    if subtrahends.is_empty() {
        return Ok(minuend.clone());
    }
    let mode = common_mode(std::iter::once(minuend).chain(subtrahends));
    match mode {
        RepresentationMode::ExactRational => {
            let q_min = BigRational::one() - minuend.to_rational();
            let q_sub: BigRational = subtrahends
                .iter()
                .map(|s| BigRational::one() - s.to_rational())
                .product();
            let ratio = q_min / q_sub;
            if ratio > BigRational::one() {
                return Err(CombineError::SubtrahendExceedsMinuend);
            }
            Ok(Probability::from_rational(BigRational::one() - ratio)?)
        }
        RepresentationMode::Floating => {
            let q_sub: f64 = subtrahends
                .iter()
                .map(Probability::complement_value)
                .product();
            let ratio = minuend.complement_value() / q_sub;
            if ratio > 1.0 + ROUNDING_SLACK {
                return Err(CombineError::SubtrahendExceedsMinuend);
            }
            Ok(Probability::new((1.0 - ratio).max(0.0))?)
        }
        RepresentationMode::LogComplement => {
            let ln_q = minuend.ln_complement()
                - subtrahends
                    .iter()
                    .map(Probability::ln_complement)
                    .sum::<f64>();
            if ln_q > ROUNDING_SLACK {
                return Err(CombineError::SubtrahendExceedsMinuend);
            }
            Ok(Probability::from_ln_complement(ln_q.min(0.0)))
        }
    }
}

/// Product of error probabilities of semantically independent channels.
///
/// In floating mode, operands below [`TINY_INPUT`] force the product through
/// log space; a result that still underflows `f64` is reported as
/// [`CombineError::Underflow`] instead of being returned as zero.
pub fn mpe_error_product(errors: &[Probability]) -> Result<Probability, CombineError> {
    if errors.is_empty() {
        return Err(CombineError::EmptyInput {
            operation: "mpe_error_product",
        });
    }
    if common_mode(errors) != RepresentationMode::Floating {
        return product(errors);
    }
    if errors.iter().any(Probability::is_zero) {
        return Ok(Probability::zero(RepresentationMode::Floating));
    }
    let value = if errors.iter().any(|e| e.value() < TINY_INPUT) {
        errors.iter().map(Probability::ln).sum::<f64>().exp()
    } else {
        errors.iter().map(Probability::value).product()
    };
    if value < f64::MIN_POSITIVE {
        return Err(CombineError::Underflow);
    }
    Ok(Probability::new(value.min(1.0))?)
}

/// Posterior `P(H|E) = P(H)P(E|H) / [P(H)P(E|H) + P(¬H)P(E|¬H)]`.
pub fn bayes_posterior(
    prior: &Probability,
    likelihood: &Probability,
    alt_likelihood: &Probability,
) -> Result<Probability, CombineError> {
    let alternatives = [
        BayesAlternative::new(prior.clone(), likelihood.clone()),
        BayesAlternative::new(prior.complement(), alt_likelihood.clone()),
    ];
    bayes_total(&alternatives, 0, Partition::Partial)
}

/// Posterior of alternative `k` over a list of alternatives:
/// `prior_k·likelihood_k / Σ priorᵢ·likelihoodᵢ`.
pub fn bayes_total(
    alternatives: &[BayesAlternative],
    k: usize,
    partition: Partition,
) -> Result<Probability, CombineError> {
    if alternatives.is_empty() {
        return Err(CombineError::EmptyInput {
            operation: "bayes_total",
        });
    }
    if k >= alternatives.len() {
        return Err(CombineError::IndexOutOfRange {
            index: k,
            len: alternatives.len(),
        });
    }
    let mode = common_mode(alternatives.iter().flat_map(|a| [&a.prior, &a.likelihood]));
    if partition == Partition::Exhaustive {
        check_partition(alternatives, mode)?;
    }
    match mode {
        RepresentationMode::ExactRational => {
            let weights: Vec<BigRational> = alternatives
                .iter()
                .map(|a| a.prior.to_rational() * a.likelihood.to_rational())
                .collect();
            let total: BigRational = weights.iter().sum();
            if total.is_zero() {
                return Err(CombineError::ZeroEvidenceProbability);
            }
            Ok(Probability::from_rational(&weights[k] / total)?)
        }
        RepresentationMode::Floating => {
            let weights: Vec<f64> = alternatives
                .iter()
                .map(|a| a.prior.value() * a.likelihood.value())
                .collect();
            let total: f64 = weights.iter().sum();
            if total == 0.0 {
                return Err(CombineError::ZeroEvidenceProbability);
            }
            Ok(Probability::new((weights[k] / total).min(1.0))?)
        }
        RepresentationMode::LogComplement => {
            let weights: Vec<f64> = alternatives
                .iter()
                .map(|a| a.prior.ln() + a.likelihood.ln())
                .collect();
            let total = log_sum_exp(&weights);
            if total == f64::NEG_INFINITY {
                return Err(CombineError::ZeroEvidenceProbability);
            }
            let others: Vec<f64> = weights
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != k)
                .map(|(_, &w)| w)
                .collect();
            let ln_p = (weights[k] - total).min(0.0);
            let ln_q = (log_sum_exp(&others) - total).min(0.0);
            Ok(Probability::log_pair(ln_p, ln_q))
        }
    }
}

fn check_partition(
    alternatives: &[BayesAlternative],
    mode: RepresentationMode,
) -> Result<(), CombineError> {
    if mode == RepresentationMode::ExactRational {
        let total: BigRational = alternatives.iter().map(|a| a.prior.to_rational()).sum();
        if !total.is_one() {
            return Err(CombineError::PartitionNotNormalized {
                total: num_traits::ToPrimitive::to_f64(&total).unwrap_or(f64::NAN),
            });
        }
    } else {
        let total: f64 = alternatives.iter().map(|a| a.prior.value()).sum();
        if (total - 1.0).abs() > PARTITION_TOLERANCE {
            return Err(CombineError::PartitionNotNormalized { total });
        }
    }
    Ok(())
}

/// Bayes for a hypothesis that implies its evidence: `P(H|E) = P(H) / P(E)`.
pub fn bayes_implied(
    prior: &Probability,
    evidence_total: &Probability,
) -> Result<Probability, CombineError> {
    if evidence_total.is_zero() {
        return Err(CombineError::ZeroEvidenceProbability);
    }
    if prior.compare(evidence_total).is_gt() {
        return Err(CombineError::ImplicationViolated {
            prior: prior.value(),
            evidence: evidence_total.value(),
        });
    }
    Ok(match common_mode([prior, evidence_total]) {
        RepresentationMode::ExactRational => {
            Probability::from_rational(prior.to_rational() / evidence_total.to_rational())?
        }
        RepresentationMode::Floating => {
            Probability::new((prior.value() / evidence_total.value()).min(1.0))?
        }
        RepresentationMode::LogComplement => {
            let ln_p = (prior.ln() - evidence_total.ln()).min(0.0);
            Probability::log_pair(ln_p, log1mexp(ln_p))
        }
    })
}

/// Rule of succession: `(successes + 1) / (trials + 2)`.
pub fn laplace_succession(
    successes: u64,
    trials: u64,
    mode: RepresentationMode,
) -> Result<Probability, CombineError> {
    if successes > trials {
        return Err(CombineError::InvalidCounts { successes, trials });
    }
    let numer = successes as f64 + 1.0;
    let failures = (trials - successes) as f64 + 1.0;
    let denom = trials as f64 + 2.0;
    Ok(match mode {
        RepresentationMode::ExactRational => Probability::from_rational(BigRational::new(
            (u128::from(successes) + 1).into(),
            (u128::from(trials) + 2).into(),
        ))?,
        RepresentationMode::Floating => Probability::new(numer / denom)?,
        RepresentationMode::LogComplement => {
            Probability::log_pair(numer.ln() - denom.ln(), failures.ln() - denom.ln())
        }
    })
}

/// Probability conferred on an event with no prior of its own by carrier
/// events: the cMPE sum of `carrier_priorᵢ × transferᵢ`.
pub fn support_transfer(
    contributions: &[SupportContribution],
) -> Result<Probability, CombineError> {
    if contributions.is_empty() {
        return Err(CombineError::EmptyInput {
            operation: "support_transfer",
        });
    }
    let conferred: Vec<Probability> = contributions
        .iter()
        .map(SupportContribution::conferred)
        .collect();
    cmpe_add(&conferred)
}

/// Combines testimonies for the disfavored side of a binary hypothesis.
///
/// The favored side is the cMPE sum of the complements; the disfavored side is
/// the plain product of the testimonies. The two sides sum to 1.
pub fn cohen_binary_combine(testimonies: &[Probability]) -> Result<BinaryVerdict, CombineError> {
    if testimonies.is_empty() {
        return Err(CombineError::EmptyInput {
            operation: "cohen_binary_combine",
        });
    }
    let half = Probability::from_ratio(1, 2).expect("1/2");
    if let Some(index) = testimonies.iter().position(|t| t.compare(&half).is_gt()) {
        return Err(CombineError::NotDisfavoredSide {
            index,
            value: testimonies[index].value(),
        });
    }
    let complements: Vec<Probability> = testimonies.iter().map(Probability::complement).collect();
    Ok(BinaryVerdict {
        favored: cmpe_add(&complements)?,
        disfavored: product(testimonies)?,
    })
}

/// `y = cmpe_add(x, delta)` over a grid of `x` in `[0, 1]` spaced by `step`.
/// The grid always ends at `x = 1`.
pub fn nonlinear_add_curve(
    delta: &Probability,
    step: f64,
) -> Result<Vec<CurvePoint>, CombineError> {
    if !(step > 0.0 && step < 1.0) {
        return Err(CombineError::InvalidStep(step));
    }
    let mode = delta.mode();
    let intervals = (1.0 / step).round();
    let xs: Vec<Probability> = if (intervals * step - 1.0).abs() < 1e-9 {
        let n = intervals as i64;
        (0..=n)
            .map(|i| Probability::from_ratio(i, n).map(|x| x.to_mode(mode)))
            .collect::<Result<_, _>>()?
    } else {
        let mut xs: Vec<Probability> = (0..)
            .map(|i| i as f64 * step)
            .take_while(|&x| x < 1.0)
            .map(|x| Probability::with_mode(x, mode))
            .collect::<Result<_, _>>()?;
        xs.push(Probability::one(mode));
        xs
    };
    xs.into_iter()
        .map(|x| {
            let y = cmpe_add(&[x.clone(), delta.clone()])?;
            Ok(CurvePoint { x, y })
        })
        .collect()
}

/// Both sides of the expansion identity
/// `a·b + (1−a)·b + a·(1−b) = 1 − (1−a)(1−b)`: returns `(lhs, rhs)`.
pub fn expansion_identity(
    a: &Probability,
    b: &Probability,
) -> Result<(Probability, Probability), CombineError> {
    let mode = common_mode([a, b]);
    let (a, b) = (a.to_mode(mode), b.to_mode(mode));
    let both = product(&[a.clone(), b.clone()])?;
    let only_b = product(&[a.complement(), b.clone()])?;
    let only_a = product(&[a.clone(), b.complement()])?;
    let lhs = match mode {
        RepresentationMode::ExactRational => Probability::from_rational(
            both.to_rational() + only_b.to_rational() + only_a.to_rational(),
        )?,
        RepresentationMode::Floating => {
            Probability::new((both.value() + only_b.value() + only_a.value()).min(1.0))?
        }
        RepresentationMode::LogComplement => Probability::from_ln(log_add_exp(
            log_add_exp(both.ln(), only_b.ln()),
            only_a.ln(),
        )),
    };
    let rhs = cmpe_add(&[a, b])?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::Tolerance;

    fn p(v: f64) -> Probability {
        Probability::new(v).unwrap()
    }

    fn r(n: i64, d: i64) -> Probability {
        Probability::from_ratio(n, d).unwrap()
    }

    fn close(a: &Probability, b: f64, tol: f64) -> bool {
        (a.value() - b).abs() <= tol
    }

    #[test]
    fn cmpe_reference_values() {
        assert_eq!(cmpe_add(&[r(2, 5), r(7, 10)]).unwrap(), r(82, 100));
        assert_eq!(
            cmpe_add(&[r(2, 5), r(7, 10), r(3, 10)]).unwrap(),
            r(874, 1000)
        );
        assert_eq!(cmpe_add(&[r(3, 5), r(2, 5), r(1, 2)]).unwrap(), r(88, 100));
        assert_eq!(
            cmpe_add(&[r(99, 100), r(999, 1000)]).unwrap(),
            r(99999, 100000)
        );
        assert!(close(&cmpe_add(&[p(0.4), p(0.7)]).unwrap(), 0.82, 1e-12));
        assert!(close(
            &cmpe_add(&[p(0.99), p(0.999)]).unwrap(),
            0.99999,
            1e-12
        ));
    }

    #[test]
    fn cmpe_identity_and_absorbing_elements() {
        assert_eq!(cmpe_add(&[r(3, 7), r(0, 1)]).unwrap(), r(3, 7));
        assert!(cmpe_add(&[p(0.3), p(1.0)]).unwrap().is_one());
        let l = Probability::with_mode(0.3, RepresentationMode::LogComplement).unwrap();
        assert!(
            cmpe_add(&[l, Probability::one(RepresentationMode::LogComplement)])
                .unwrap()
                .is_one()
        );
        assert!(cmpe_add(&[]).is_err());
    }

    #[test]
    fn dpe_reference_values() {
        let v = dpe_sub(&r(1, 2), &[r(1, 10)]).unwrap();
        assert_eq!(v, r(4, 9));
        assert_eq!(dpe_sub(&r(6, 10), &[r(2, 10)]).unwrap(), r(1, 2));
        assert_eq!(
            dpe_sub(&r(99999, 100000), &[r(999, 1000)]).unwrap(),
            r(99, 100)
        );
        assert_eq!(dpe_sub(&r(9996, 10000), &[r(99, 100)]).unwrap(), r(96, 100));
        assert_eq!(dpe_sub(&r(3, 7), &[r(0, 1)]).unwrap(), r(3, 7));
        assert!(close(
            &dpe_sub(&p(0.5), &[p(0.1)]).unwrap(),
            4.0 / 9.0,
            1e-15
        ));
        assert!(close(
            &dpe_sub(&p(0.99999), &[p(0.999)]).unwrap(),
            0.99,
            1e-9
        ));
    }

    #[test]
    fn dpe_errors() {
        assert_eq!(
            dpe_sub(&p(0.1), &[p(0.5)]),
            Err(CombineError::SubtrahendExceedsMinuend)
        );
        assert_eq!(
            dpe_sub(&r(1, 10), &[r(1, 2)]),
            Err(CombineError::SubtrahendExceedsMinuend)
        );
        let l = |v| Probability::with_mode(v, RepresentationMode::LogComplement).unwrap();
        assert_eq!(
            dpe_sub(&l(0.1), &[l(0.5)]),
            Err(CombineError::SubtrahendExceedsMinuend)
        );
        assert_eq!(
            dpe_sub(&p(0.5), &[p(0.2), p(1.0)]),
            Err(CombineError::DivisionByZeroComplement { index: 1 })
        );
        assert_eq!(
            dpe_sub(&p(1.0), &[p(1.0)]),
            Err(CombineError::DivisionByZeroComplement { index: 0 })
        );
    }

    #[test]
    fn dpe_multiple_subtrahends() {
        let total = cmpe_add(&[r(1, 3), r(1, 4), r(1, 5)]).unwrap();
        assert_eq!(dpe_sub(&total, &[r(1, 4), r(1, 5)]).unwrap(), r(1, 3));
    }

    #[test]
    fn mpe_values() {
        let e = |s: &str| Probability::parse_decimal(s).unwrap();
        assert_eq!(
            mpe_error_product(&[e("1e-3"), e("1e-2"), e("1e-3")]).unwrap(),
            e("1e-8")
        );
        assert_eq!(
            mpe_error_product(&[e("1e-15"), e("1e-15"), e("1e-15")]).unwrap(),
            e("1e-45")
        );
        assert!(mpe_error_product(&[p(1.0)]).unwrap().is_one());
        let f = mpe_error_product(&[p(1e-3), p(1e-2), p(1e-3)]).unwrap();
        assert!((f.value() - 1e-8).abs() / 1e-8 < 1e-12);
    }

    #[test]
    fn mpe_reports_float_underflow() {
        let tiny = p(1e-200);
        assert_eq!(
            mpe_error_product(&[tiny.clone(), tiny.clone()]),
            Err(CombineError::Underflow)
        );
        let lt = tiny.to_mode(RepresentationMode::LogComplement);
        let v = mpe_error_product(&[lt.clone(), lt]).unwrap();
        assert!((v.ln() - 2.0 * 1e-200f64.ln()).abs() < 1e-9);
        assert!(mpe_error_product(&[p(0.0), tiny]).unwrap().is_zero());
    }

    #[test]
    fn bayes_posterior_values() {
        let post = bayes_posterior(&p(0.5), &p(0.6), &p(0.8)).unwrap();
        assert!(close(&post, 3.0 / 7.0, 1e-15));
        let post = bayes_posterior(&r(1, 2), &r(2, 5), &r(1, 1)).unwrap();
        assert_eq!(post, r(2, 7));
        let post = bayes_posterior(&r(1, 3), &r(1, 2), &r(1, 2)).unwrap();
        assert_eq!(post, r(1, 3));
        assert_eq!(
            bayes_posterior(&p(0.5), &p(0.0), &p(0.0)),
            Err(CombineError::ZeroEvidenceProbability)
        );
    }

    #[test]
    fn bayes_total_values() {
        let alts = |pr: &[(i64, i64)], lk: &[(i64, i64)]| -> Vec<BayesAlternative> {
            pr.iter()
                .zip(lk)
                .map(|(&(a, b), &(c, d))| BayesAlternative::new(r(a, b), r(c, d)))
                .collect()
        };
        let two = alts(&[(1, 2), (1, 2)], &[(3, 5), (4, 5)]);
        assert_eq!(
            bayes_total(&two, 0, Partition::Exhaustive).unwrap(),
            r(3, 7)
        );
        let flat = alts(&[(3, 10), (7, 10)], &[(1, 1), (1, 1)]);
        assert_eq!(
            bayes_total(&flat, 0, Partition::Exhaustive).unwrap(),
            r(3, 10)
        );
        // 4/7 from the exact joint-table oracle
        let three = alts(&[(1, 4), (1, 4), (1, 2)], &[(4, 5), (2, 5), (1, 10)]);
        assert_eq!(
            bayes_total(&three, 0, Partition::Exhaustive).unwrap(),
            r(4, 7)
        );
        let uneven = alts(&[(1, 4), (1, 4)], &[(4, 5), (2, 5)]);
        assert!(matches!(
            bayes_total(&uneven, 0, Partition::Exhaustive),
            Err(CombineError::PartitionNotNormalized { .. })
        ));
        assert_eq!(
            bayes_total(&uneven, 0, Partition::Partial).unwrap(),
            r(2, 3)
        );
        assert!(matches!(
            bayes_total(&uneven, 2, Partition::Partial),
            Err(CombineError::IndexOutOfRange { index: 2, len: 2 })
        ));
        let zero = alts(&[(1, 2), (1, 2)], &[(0, 1), (0, 1)]);
        assert_eq!(
            bayes_total(&zero, 0, Partition::Exhaustive),
            Err(CombineError::ZeroEvidenceProbability)
        );
    }

    #[test]
    fn bayes_agrees_across_modes() {
        for mode in [
            RepresentationMode::Floating,
            RepresentationMode::LogComplement,
        ] {
            let m = |v| Probability::with_mode(v, mode).unwrap();
            let post = bayes_posterior(&m(0.25), &m(0.8), &m(0.4)).unwrap();
            assert_eq!(post.mode(), mode);
            assert!(close(&post, 0.2 / 0.5, 1e-14));
            assert!((post.complement_value() - 0.6).abs() < 1e-14);
        }
    }

    #[test]
    fn bayes_implied_values() {
        assert_eq!(bayes_implied(&r(4, 10), &r(9, 10)).unwrap(), r(4, 9));
        assert!(close(
            &bayes_implied(&p(0.4), &p(0.9)).unwrap(),
            0.4444,
            1e-4
        ));
        assert_eq!(bayes_implied(&r(1, 3), &r(1, 1)).unwrap(), r(1, 3));
        assert!(bayes_implied(&p(0.37), &p(0.37)).unwrap().is_one());
        assert!(matches!(
            bayes_implied(&p(0.5), &p(0.4)),
            Err(CombineError::ImplicationViolated { .. })
        ));
        assert_eq!(
            bayes_implied(&p(0.0), &p(0.0)),
            Err(CombineError::ZeroEvidenceProbability)
        );
    }

    #[test]
    fn laplace_values() {
        let q = RepresentationMode::ExactRational;
        assert_eq!(laplace_succession(50, 50, q).unwrap(), r(51, 52));
        assert_eq!(laplace_succession(1, 1, q).unwrap(), r(2, 3));
        assert_eq!(laplace_succession(0, 0, q).unwrap(), r(1, 2));
        assert_eq!(laplace_succession(3, 10, q).unwrap(), r(4, 12));
        assert!(close(
            &laplace_succession(50, 50, RepresentationMode::Floating).unwrap(),
            51.0 / 52.0,
            1e-15
        ));
        let l = laplace_succession(
            10u64.pow(12),
            10u64.pow(12),
            RepresentationMode::LogComplement,
        )
        .unwrap();
        assert!((l.complement_value() - 1.0 / (1e12 + 2.0)).abs() < 1e-24);
        assert!(laplace_succession(3, 2, q).is_err());
    }

    #[test]
    fn support_transfer_values() {
        let c = |a, b| SupportContribution::new(a, b);
        let v = support_transfer(&[c(r(6, 10), r(5, 10)), c(r(8, 10), r(4, 10))]).unwrap();
        assert_eq!(v, r(524, 1000));
        assert_eq!(support_transfer(&[c(r(1, 1), r(2, 7))]).unwrap(), r(2, 7));
        let v = support_transfer(&[c(r(1, 2), r(1, 2)), c(r(1, 2), r(1, 2))]).unwrap();
        assert_eq!(v, r(7, 16));
    }

    #[test]
    fn cohen_values() {
        let v = cohen_binary_combine(&[r(1, 4), r(1, 4)]).unwrap();
        assert_eq!((v.favored, v.disfavored), (r(15, 16), r(1, 16)));
        let v = cohen_binary_combine(&[r(1, 2), r(1, 2)]).unwrap();
        assert_eq!((v.favored, v.disfavored), (r(3, 4), r(1, 4)));
        let v = cohen_binary_combine(&[r(1, 5)]).unwrap();
        assert_eq!((v.favored, v.disfavored), (r(4, 5), r(1, 5)));
        let v = cohen_binary_combine(&[p(0.25), p(0.25)]).unwrap();
        assert!(close(&v.favored, 0.9375, 1e-15) && close(&v.disfavored, 0.0625, 1e-15));
        assert!(matches!(
            cohen_binary_combine(&[p(0.25), p(0.75)]),
            Err(CombineError::NotDisfavoredSide { index: 1, .. })
        ));
    }

    #[test]
    fn curve_values() {
        let curve = nonlinear_add_curve(&r(2, 5), 0.1).unwrap();
        assert_eq!(curve.len(), 11);
        assert_eq!(curve[0].y, r(2, 5));
        assert!(curve[10].y.is_one());
        assert_eq!(curve[5].y, r(7, 10));
        assert_eq!(curve[6].y, r(19, 25));
        let f = nonlinear_add_curve(&p(0.4), 0.3).unwrap();
        assert!(f.last().unwrap().x.is_one());
        assert!(close(&f[1].y, 1.0 - 0.7 * 0.6, 1e-15));
        assert_eq!(
            nonlinear_add_curve(&p(0.4), 0.0),
            Err(CombineError::InvalidStep(0.0))
        );
        assert_eq!(
            nonlinear_add_curve(&p(0.4), 1.0),
            Err(CombineError::InvalidStep(1.0))
        );
    }

    #[test]
    fn expansion_identity_check_values() {
        let (lhs, rhs) = expansion_identity(&r(3, 10), &r(8, 10)).unwrap();
        assert_eq!(lhs, r(86, 100));
        assert_eq!(rhs, r(86, 100));
        let (lhs, rhs) = expansion_identity(&p(0.3), &p(0.8)).unwrap();
        assert!(lhs.approx_eq(&rhs, Tolerance::DEFAULT));
    }
}
