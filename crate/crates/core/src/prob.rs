//! Probability values and the primitive complement/product arithmetic.
//!
//! A [`Probability`] lives in one of three representations:
//!
//! - **Floating**: a plain `f64`.
//! - **LogComplement**: the pair `(ln p, ln(1 − p))`. Both tails stay resolvable,
//!   so a probability of error of 10⁻⁴⁵ (or a confidence of 1 − 10⁻⁴⁵) survives
//!   arithmetic that would round it away in `f64`. Products of probabilities are
//!   sums of `ln p`; products of complements are sums of `ln(1 − p)`.
//! - **ExactRational**: an arbitrary-precision fraction in lowest terms.
//!
//! Out-of-range values are rejected on construction and never clamped.

use std::cmp::Ordering;
use std::f64::consts::LN_2;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{CombineError, ProbabilityError};

/// Absolute tolerance used for floating-point comparisons.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Tolerance(pub f64);

impl Tolerance {
    pub const DEFAULT: Tolerance = Tolerance(1e-9);

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::DEFAULT
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RepresentationMode {
    Floating,
    LogComplement,
    ExactRational,
}

impl RepresentationMode {
    pub fn name(self) -> &'static str {
        match self {
            RepresentationMode::Floating => "float",
            RepresentationMode::LogComplement => "log",
            RepresentationMode::ExactRational => "rational",
        }
    }
}

/// `ln(1 − p)`, the log of the probability of error. `0` encodes `p = 0`
/// and `−∞` encodes `p = 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ErrorComplement(f64);

impl ErrorComplement {
    pub fn new(log_complement: f64) -> Result<Self, ProbabilityError> {
        if log_complement.is_nan() {
            return Err(ProbabilityError::NotANumber);
        }
        if log_complement > 0.0 {
            return Err(ProbabilityError::PositiveLogComplement(log_complement));
        }
        Ok(ErrorComplement(log_complement + 0.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Floating(f64),
    // ln p and ln(1 - p); exp(ln_p) + exp(ln_q) = 1
    Log { ln_p: f64, ln_q: f64 },
    Rational(BigRational),
}

/// A value in `[0, 1]` tagged with its representation.
#[derive(Debug, Clone, PartialEq)]
pub struct Probability(Repr);

impl Probability {
    /// Floating-mode probability.
    pub fn new(value: f64) -> Result<Self, ProbabilityError> {
        if value.is_nan() {
            return Err(ProbabilityError::NotANumber);
        }
        if !(0.0..=1.0).contains(&value) {
            return Err(ProbabilityError::OutOfRange(value.to_string()));
        }
        Ok(Probability(Repr::Floating(value + 0.0)))
    }

    /// Exact-rational probability.
    pub fn from_rational(value: BigRational) -> Result<Self, ProbabilityError> {
        if value.is_negative() || value > BigRational::one() {
            return Err(ProbabilityError::OutOfRange(value.to_string()));
        }
        Ok(Probability(Repr::Rational(value)))
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Result<Self, ProbabilityError> {
        if denom == 0 {
            return Err(ProbabilityError::ZeroDenominator);
        }
        Self::from_rational(BigRational::new(numer.into(), denom.into()))
    }

    /// Parses a decimal literal (`0.4`, `.25`, `1e-15`) exactly into rational mode.
    pub fn parse_decimal(text: &str) -> Result<Self, ProbabilityError> {
        let value = parse_decimal(text)?;
        Self::from_rational(value).map_err(|_| ProbabilityError::OutOfRange(text.to_string()))
    }

    /// Builds a probability from `f64` in the requested mode.
    pub fn with_mode(value: f64, mode: RepresentationMode) -> Result<Self, ProbabilityError> {
        Ok(Self::new(value)?.to_mode(mode))
    }

    pub fn zero(mode: RepresentationMode) -> Self {
        match mode {
            RepresentationMode::Floating => Probability(Repr::Floating(0.0)),
            RepresentationMode::LogComplement => Self::log_pair(f64::NEG_INFINITY, 0.0),
            RepresentationMode::ExactRational => Probability(Repr::Rational(BigRational::zero())),
        }
    }

    pub fn one(mode: RepresentationMode) -> Self {
        match mode {
            RepresentationMode::Floating => Probability(Repr::Floating(1.0)),
            RepresentationMode::LogComplement => Self::log_pair(0.0, f64::NEG_INFINITY),
            RepresentationMode::ExactRational => Probability(Repr::Rational(BigRational::one())),
        }
    }

    /// Log-complement probability with `ln p` given; `ln(1 − p)` is derived.
    pub(crate) fn from_ln(ln_p: f64) -> Self {
        let ln_p = ln_p.min(0.0);
        Self::log_pair(ln_p, log1mexp(ln_p))
    }

    /// Log-complement probability with `ln(1 − p)` given; `ln p` is derived.
    pub(crate) fn from_ln_complement(ln_q: f64) -> Self {
        let ln_q = ln_q.min(0.0);
        Self::log_pair(log1mexp(ln_q), ln_q)
    }

    pub(crate) fn log_pair(ln_p: f64, ln_q: f64) -> Self {
        Probability(Repr::Log {
            ln_p: ln_p + 0.0,
            ln_q: ln_q + 0.0,
        })
    }

    pub fn mode(&self) -> RepresentationMode {
        match self.0 {
            Repr::Floating(_) => RepresentationMode::Floating,
            Repr::Log { .. } => RepresentationMode::LogComplement,
            Repr::Rational(_) => RepresentationMode::ExactRational,
        }
    }

    /// Nearest `f64`. Extreme log-complement values may round to 0 or 1 here.
    pub fn value(&self) -> f64 {
        match &self.0 {
            Repr::Floating(v) => *v,
            Repr::Log { ln_p, ln_q } => {
                if ln_p >= ln_q {
                    -ln_q.exp_m1()
                } else {
                    ln_p.exp()
                }
            }
            Repr::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// `1 − p` as `f64`, computed without cancellation where the representation allows.
    pub fn complement_value(&self) -> f64 {
        match &self.0 {
            Repr::Floating(v) => 1.0 - v,
            Repr::Log { ln_p, ln_q } => {
                if ln_q >= ln_p {
                    -ln_p.exp_m1()
                } else {
                    ln_q.exp()
                }
            }
            Repr::Rational(r) => (BigRational::one() - r).to_f64().unwrap_or(f64::NAN),
        }
    }

    /// `ln p`.
    pub fn ln(&self) -> f64 {
        match &self.0 {
            Repr::Floating(v) => v.ln(),
            Repr::Log { ln_p, .. } => *ln_p,
            Repr::Rational(r) => ratio_ln(r.numer(), r.denom()),
        }
    }

    /// `ln(1 − p)`.
    pub fn ln_complement(&self) -> f64 {
        match &self.0 {
            Repr::Floating(v) => (-v).ln_1p(),
            Repr::Log { ln_q, .. } => *ln_q,
            Repr::Rational(r) => ratio_ln(&(r.denom() - r.numer()), r.denom()),
        }
    }

    /// Exact rational value. Floating values convert by their binary expansion.
    pub fn to_rational(&self) -> BigRational {
        match &self.0 {
            Repr::Rational(r) => r.clone(),
            _ => BigRational::from_float(self.value()).unwrap_or_else(BigRational::zero),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn to_mode(&self, mode: RepresentationMode) -> Probability {
        if self.mode() == mode {
            return self.clone();
        }
        match mode {
            RepresentationMode::Floating => Probability(Repr::Floating(self.value())),
            RepresentationMode::LogComplement => Self::log_pair(self.ln(), self.ln_complement()),
            RepresentationMode::ExactRational => Probability(Repr::Rational(self.to_rational())),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Floating(v) => *v == 0.0,
            Repr::Log { ln_p, .. } => *ln_p == f64::NEG_INFINITY,
            Repr::Rational(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Floating(v) => *v == 1.0,
            Repr::Log { ln_q, .. } => *ln_q == f64::NEG_INFINITY,
            Repr::Rational(r) => r.is_one(),
        }
    }

    /// Total order on values. Exact for two rationals; otherwise compared on
    /// whichever log scale resolves the values best.
    pub fn compare(&self, other: &Probability) -> Ordering {
        if let (Repr::Rational(a), Repr::Rational(b)) = (&self.0, &other.0) {
            return a.cmp(b);
        }
        if let (Repr::Floating(a), Repr::Floating(b)) = (&self.0, &other.0) {
            return a.total_cmp(b);
        }
        let (pa, pb) = (self.ln(), other.ln());
        if pa > -LN_2 && pb > -LN_2 {
            other.ln_complement().total_cmp(&self.ln_complement())
        } else {
            pa.total_cmp(&pb)
        }
    }

    pub fn approx_eq(&self, other: &Probability, tolerance: Tolerance) -> bool {
        if let (Repr::Rational(a), Repr::Rational(b)) = (&self.0, &other.0) {
            if a == b {
                return true;
            }
        }
        (self.value() - other.value()).abs() <= tolerance.value()
    }

    pub fn complement(&self) -> Probability {
        match &self.0 {
            Repr::Floating(v) => Probability(Repr::Floating(1.0 - v)),
            Repr::Log { ln_p, ln_q } => Self::log_pair(*ln_q, *ln_p),
            Repr::Rational(r) => Probability(Repr::Rational(BigRational::one() - r)),
        }
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Rational(r) => write!(f, "{r}"),
            _ => write!(f, "{}", self.value()),
        }
    }
}

impl Serialize for Probability {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.value())
    }
}

/// `1 − p`, in the same representation. Involutive.
pub fn complement(p: &Probability) -> Probability {
    p.complement()
}

/// Mode an operation runs in: rational only if every operand is rational,
/// log-complement if any operand is, floating otherwise.
pub fn common_mode<'a, I>(ps: I) -> RepresentationMode
where
    I: IntoIterator<Item = &'a Probability>,
{
    let mut all_rational = true;
    let mut any_log = false;
    let mut any = false;
    for p in ps {
        any = true;
        match p.mode() {
            RepresentationMode::ExactRational => {}
            RepresentationMode::LogComplement => {
                any_log = true;
                all_rational = false;
            }
            RepresentationMode::Floating => all_rational = false,
        }
    }
    if any && all_rational {
        RepresentationMode::ExactRational
    } else if any_log {
        RepresentationMode::LogComplement
    } else {
        RepresentationMode::Floating
    }
}

/// `Π pᵢ`.
pub fn product(ps: &[Probability]) -> Result<Probability, CombineError> {
    if ps.is_empty() {
        return Err(CombineError::EmptyInput {
            operation: "product",
        });
    }
    Ok(match common_mode(ps) {
        RepresentationMode::Floating => {
            Probability(Repr::Floating(ps.iter().map(Probability::value).product()))
        }
        RepresentationMode::LogComplement => {
            Probability::from_ln(ps.iter().map(Probability::ln).sum())
        }
        RepresentationMode::ExactRational => Probability(Repr::Rational(
            ps.iter().map(Probability::to_rational).product(),
        )),
    })
}

/// `Π (1 − pᵢ)`. In log-complement mode this is a plain sum of log-complements.
pub fn complement_product(ps: &[Probability]) -> Result<Probability, CombineError> {
    if ps.is_empty() {
        return Err(CombineError::EmptyInput {
            operation: "complement product",
        });
    }
    Ok(match common_mode(ps) {
        RepresentationMode::Floating => Probability(Repr::Floating(
            ps.iter().map(Probability::complement_value).product(),
        )),
        RepresentationMode::LogComplement => {
            Probability::from_ln(ps.iter().map(Probability::ln_complement).sum())
        }
        RepresentationMode::ExactRational => Probability(Repr::Rational(
            ps.iter()
                .map(|p| BigRational::one() - p.to_rational())
                .product(),
        )),
    })
}

pub fn to_log_complement(p: &Probability) -> ErrorComplement {
    ErrorComplement(p.ln_complement() + 0.0)
}

/// Inverse of [`to_log_complement`]; the result is in log-complement mode.
pub fn from_log_complement(e: ErrorComplement) -> Probability {
    Probability::from_ln_complement(e.0)
}

/// `ln(1 − eˣ)` for `x ≤ 0`, accurate at both ends.
pub fn log1mexp(x: f64) -> f64 {
    if x == 0.0 {
        f64::NEG_INFINITY
    } else if x > -LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p() + 0.0
    }
}

/// `ln(eᵃ + eᵇ)`.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `ln Σ exp(xᵢ)`.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// Exact value of a non-negative decimal literal such as `0.25`, `.4`, `1e-15`.
pub fn parse_decimal(text: &str) -> Result<BigRational, ProbabilityError> {
    let invalid = || ProbabilityError::InvalidDecimal(text.to_string());
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) => {
            let exp: i64 = text[i + 1..].parse().map_err(|_| invalid())?;
            (&text[..i], exp)
        }
        None => (text, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let digits_ok = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
    if (int_part.is_empty() && frac_part.is_empty())
        || !digits_ok(int_part)
        || !digits_ok(frac_part)
    {
        return Err(invalid());
    }
    if exponent.abs() > 100_000 {
        return Err(invalid());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| invalid())?
    };
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

/// `ln(a / b)` for `0 ≤ a ≤ b`, `b > 0`, without forming `a / b` in `f64`.
fn ratio_ln(a: &BigInt, b: &BigInt) -> f64 {
    if a.is_zero() {
        return f64::NEG_INFINITY;
    }
    let ratio = BigRational::new(a.clone(), b.clone());
    if ratio.to_f64().is_some_and(|r| r >= 0.5) {
        let rest = BigRational::new(b - a, b.clone());
        (-rest.to_f64().unwrap_or(0.0)).ln_1p() + 0.0
    } else {
        big_ln(a) - big_ln(b)
    }
}

fn big_ln(n: &BigInt) -> f64 {
    debug_assert_eq!(n.sign(), Sign::Plus);
    let bits = n.bits();
    if bits <= 1000 {
        n.to_f64().map_or(f64::INFINITY, f64::ln)
    } else {
        let shift = bits - 64;
        let top: BigInt = n >> shift;
        top.to_f64().map_or(f64::INFINITY, f64::ln) + shift as f64 * LN_2
    }
}
