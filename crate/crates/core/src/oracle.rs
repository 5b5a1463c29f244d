//! Exact verification by enumeration.
//!
//! Everything here works on [`BigRational`] and enumerates outcome atoms
//! directly, independently of the combinator implementations it is used to
//! check.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::combinators::{cmpe_add, cohen_binary_combine, dpe_sub, expansion_identity};
use crate::prob::Probability;

pub const MAX_EVENTS: usize = 20;
/// Largest denominator of battery-drawn rationals.
pub const MAX_DENOMINATOR: i64 = 64;
/// Largest event space drawn per battery case.
pub const BATTERY_MAX_EVENTS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("event space with {0} events exceeds the enumeration limit of {MAX_EVENTS}")]
    SpaceTooLarge(usize),
    #[error("event probability {0} is outside [0, 1]")]
    OutOfRange(BigRational),
    #[error("joint table cells must be non-negative and sum to 1")]
    NotNormalized,
    #[error("joint table has no mass on the evidence column")]
    ZeroEvidenceColumn,
    #[error("row {index} out of range for {len} alternatives")]
    IndexOutOfRange { index: usize, len: usize },
}

fn check_unit(p: &BigRational) -> Result<(), OracleError> {
    if p.is_negative() || *p > BigRational::one() {
        Err(OracleError::OutOfRange(p.clone()))
    } else {
        Ok(())
    }
}

/// Mutually independent binary events with exact probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteEventSpace {
    event_probs: Vec<BigRational>,
}

impl FiniteEventSpace {
    pub fn new(event_probs: Vec<BigRational>) -> Result<Self, OracleError> {
        if event_probs.len() > MAX_EVENTS {
            return Err(OracleError::SpaceTooLarge(event_probs.len()));
        }
        event_probs.iter().try_for_each(check_unit)?;
        Ok(FiniteEventSpace { event_probs })
    }

    pub fn len(&self) -> usize {
        self.event_probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.event_probs.is_empty()
    }

    pub fn event_probs(&self) -> &[BigRational] {
        &self.event_probs
    }

    /// Calls `visit(mask, mass)` for each of the 2ⁿ outcome atoms; bit `i`
    /// of `mask` is set when event `i` occurs.
    fn for_each_atom(&self, mut visit: impl FnMut(u32, BigRational)) {
        // common denominator keeps the inner loop on integers
        let denom: BigInt = self.event_probs.iter().map(|p| p.denom().clone()).product();
        let occur: Vec<BigInt> = self
            .event_probs
            .iter()
            .map(|p| p.numer() * (&denom / p.denom()))
            .collect();
        let fail: Vec<BigInt> = occur.iter().map(|o| &denom - o).collect();
        let n = self.event_probs.len();
        let scale = num_traits::pow(denom, n);
        for mask in 0u32..(1u32 << n) {
            let mut mass = BigInt::one();
            for i in 0..n {
                mass *= if mask >> i & 1 == 1 {
                    &occur[i]
                } else {
                    &fail[i]
                };
            }
            visit(mask, BigRational::new(mass, scale.clone()));
        }
    }

    /// Sum of all atom masses; exactly 1 for a valid space.
    pub fn total_mass(&self) -> BigRational {
        let mut total = BigRational::zero();
        self.for_each_atom(|_, m| total += m);
        total
    }
}

/// Probability that at least one event occurs, by summing every atom in
/// which some event occurs.
pub fn union_probability(space: &FiniteEventSpace) -> BigRational {
    let mut total = BigRational::zero();
    space.for_each_atom(|mask, m| {
        if mask != 0 {
            total += m;
        }
    });
    total
}

/// Joint masses of `k` alternatives against evidence `E` / `¬E`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTable {
    // (mass with E, mass with ¬E) per alternative
    cells: Vec<(BigRational, BigRational)>,
}

impl JointTable {
    pub fn new(cells: Vec<(BigRational, BigRational)>) -> Result<Self, OracleError> {
        let total: BigRational = cells.iter().map(|(e, ne)| e + ne).sum();
        if cells.is_empty()
            || !total.is_one()
            || cells
                .iter()
                .any(|(e, ne)| e.is_negative() || ne.is_negative())
        {
            return Err(OracleError::NotNormalized);
        }
        Ok(JointTable { cells })
    }

    /// Builds the table from priors and likelihoods `P(E | Aᵢ)`.
    pub fn from_conditionals(
        priors: &[BigRational],
        likelihoods: &[BigRational],
    ) -> Result<Self, OracleError> {
        priors.iter().chain(likelihoods).try_for_each(check_unit)?;
        let cells = priors
            .iter()
            .zip(likelihoods)
            .map(|(p, l)| (p * l, p * (BigRational::one() - l)))
            .collect();
        Self::new(cells)
    }

    pub fn cells(&self) -> &[(BigRational, BigRational)] {
        &self.cells
    }

    /// Marginal `P(Aᵢ)` of each row.
    pub fn priors(&self) -> Vec<BigRational> {
        self.cells.iter().map(|(e, ne)| e + ne).collect()
    }

    /// `P(E | Aᵢ)` of each row; rows without mass get 0.
    pub fn likelihoods(&self) -> Vec<BigRational> {
        self.cells
            .iter()
            .map(|(e, ne)| {
                let row = e + ne;
                if row.is_zero() {
                    BigRational::zero()
                } else {
                    e / row
                }
            })
            .collect()
    }
}

/// `cell(k, E) / Σᵢ cell(i, E)`.
pub fn posterior_from_table(table: &JointTable, k: usize) -> Result<BigRational, OracleError> {
    let len = table.cells.len();
    let (row, _) = table
        .cells
        .get(k)
        .ok_or(OracleError::IndexOutOfRange { index: k, len })?;
    let column: BigRational = table.cells.iter().map(|(e, _)| e).sum();
    if column.is_zero() {
        return Err(OracleError::ZeroEvidenceColumn);
    }
    Ok(row / column)
}

/// Operands of one battery case.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseInput {
    pub events: Vec<BigRational>,
    pub a: BigRational,
    pub b: BigRational,
}

impl CaseInput {
    /// All four checks run on `events`; `a`, `b` default to its ends.
    pub fn from_events(events: Vec<BigRational>) -> Self {
        let a = events.first().cloned().unwrap_or_else(BigRational::zero);
        let b = events.last().cloned().unwrap_or_else(BigRational::zero);
        CaseInput { events, a, b }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    UnionEnumeration,
    SubtractionRoundTrip,
    ExpansionIdentity,
    BinaryComplementarity,
}

impl Check {
    pub fn describe(self) -> &'static str {
        match self {
            Check::UnionEnumeration => "cmpe_add equals the enumerated union probability",
            Check::SubtractionRoundTrip => "dpe_sub(cmpe_add(a, b), [b]) equals a",
            Check::ExpansionIdentity => "ab + (1-a)b + a(1-b) equals 1 - (1-a)(1-b)",
            Check::BinaryComplementarity => "binary rule sides sum to 1",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub case: usize,
    pub check: Check,
    pub operands: Vec<String>,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatterySummary {
    pub seed: u64,
    pub cases: usize,
    pub passed: usize,
    pub first_counterexample: Option<Counterexample>,
}

impl BatterySummary {
    pub fn all_passed(&self) -> bool {
        self.first_counterexample.is_none() && self.passed == self.cases
    }
}

fn exact(p: &BigRational) -> Probability {
    Probability::from_rational(p.clone()).expect("battery operands are probabilities")
}

fn text(ps: &[&BigRational]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

/// Runs the four exact checks on one case; `case` only labels the counterexample.
pub fn check_case(case: usize, input: &CaseInput) -> Result<(), Counterexample> {
    let fail = |check, operands: Vec<String>, expected: String, actual: String| Counterexample {
        case,
        check,
        operands,
        expected,
        actual,
    };
    let events: Vec<Probability> = input.events.iter().map(exact).collect();
    let all: Vec<&BigRational> = input.events.iter().collect();

    if !events.is_empty() {
        let space = FiniteEventSpace::new(input.events.clone()).map_err(|e| {
            fail(
                Check::UnionEnumeration,
                text(&all),
                "valid space".into(),
                e.to_string(),
            )
        })?;
        let expected = union_probability(&space);
        let actual = cmpe_add(&events).map(|p| p.to_rational());
        if actual.as_ref() != Ok(&expected) {
            return Err(fail(
                Check::UnionEnumeration,
                text(&all),
                expected.to_string(),
                format!("{actual:?}"),
            ));
        }
    }

    let (a, b) = (exact(&input.a), exact(&input.b));
    let pair = text(&[&input.a, &input.b]);
    if !b.is_one() {
        let round_trip = cmpe_add(&[a.clone(), b.clone()])
            .and_then(|sum| dpe_sub(&sum, std::slice::from_ref(&b)));
        if round_trip.as_ref() != Ok(&a) {
            return Err(fail(
                Check::SubtractionRoundTrip,
                pair,
                input.a.to_string(),
                format!("{round_trip:?}"),
            ));
        }
    }

    match expansion_identity(&a, &b) {
        Ok((lhs, rhs)) if lhs == rhs => {}
        other => {
            return Err(fail(
                Check::ExpansionIdentity,
                pair,
                "lhs = rhs".into(),
                format!("{other:?}"),
            ))
        }
    }

    // the disfavored side of each event
    let half = BigRational::new(1.into(), 2.into());
    let testimonies: Vec<Probability> = input
        .events
        .iter()
        .map(|p| {
            let q = BigRational::one() - p;
            exact(if *p <= half { p } else { &q })
        })
        .collect();
    if !testimonies.is_empty() {
        let verdict = cohen_binary_combine(&testimonies);
        let sums_to_one = verdict
            .as_ref()
            .is_ok_and(|v| (v.favored.to_rational() + v.disfavored.to_rational()).is_one());
        if !sums_to_one {
            return Err(fail(
                Check::BinaryComplementarity,
                testimonies.iter().map(|t| t.to_string()).collect(),
                "1".into(),
                format!("{verdict:?}"),
            ));
        }
    }
    Ok(())
}

fn draw(rng: &mut ChaCha8Rng) -> BigRational {
    let denom = rng.random_range(1..=MAX_DENOMINATOR);
    let numer = rng.random_range(0..=denom);
    BigRational::new(numer.into(), denom.into())
}

/// Deterministic pseudo-random case `index` of the battery seeded with `seed`.
pub fn battery_case(seed: u64, index: usize) -> CaseInput {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let n = rng.random_range(1..=BATTERY_MAX_EVENTS);
    let events = (0..n).map(|_| draw(&mut rng)).collect();
    let a = draw(&mut rng);
    let mut b = draw(&mut rng);
    if b.is_one() {
        b = BigRational::zero();
    }
    CaseInput { events, a, b }
}

/// Runs `cases` deterministic cases. Each case has its own RNG stream, so the
/// summary does not depend on evaluation order.
pub fn random_property_battery(seed: u64, cases: usize) -> BatterySummary {
    let mut passed = 0;
    let mut first_counterexample = None;
    for index in 0..cases {
        match check_case(index, &battery_case(seed, index)) {
            Ok(()) => passed += 1,
            Err(c) => {
                first_counterexample.get_or_insert(c);
            }
        }
    }
    BatterySummary {
        seed,
        cases,
        passed,
        first_counterexample,
    }
}
