use thiserror::Error;

/// Failure to construct a probability value.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProbabilityError {
    #[error("{0} is outside [0, 1]")]
    OutOfRange(String),
    #[error("probability is not a number")]
    NotANumber,
    #[error("log-complement {0} is positive")]
    PositiveLogComplement(f64),
    #[error("`{0}` is not a decimal literal")]
    InvalidDecimal(String),
    #[error("rational with zero denominator")]
    ZeroDenominator,
}

/// Failure of a combination operator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CombineError {
    #[error("{operation} needs at least one operand")]
    EmptyInput { operation: &'static str },
    #[error("subtrahend exceeds minuend: the error complement of the minuend is larger than the product of the subtrahend complements")]
    SubtrahendExceedsMinuend,
    #[error("subtrahend #{index} equals 1, its complement is zero")]
    DivisionByZeroComplement { index: usize },
    #[error("total probability of the evidence is zero")]
    ZeroEvidenceProbability,
    #[error("priors of an exhaustive partition sum to {total}, not 1")]
    PartitionNotNormalized { total: f64 },
    #[error(
        "hypothesis implies the evidence, so P(E) = {evidence} cannot be below P(H) = {prior}"
    )]
    ImplicationViolated { prior: f64, evidence: f64 },
    #[error("testimony #{index} = {value} is above 0.5; pass the disfavored side")]
    NotDisfavoredSide { index: usize, value: f64 },
    #[error("index {index} out of range for {len} alternatives")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("{successes} successes in {trials} trials")]
    InvalidCounts { successes: u64, trials: u64 },
    #[error("grid step {0} is not in (0, 1)")]
    InvalidStep(f64),
    #[error("floating-point product underflowed; use log-complement or rational mode")]
    Underflow,
    #[error("chain value {raw_value} exceeds 1 at consequence {index}")]
    ChainOverflow { raw_value: f64, index: usize },
    #[error("consequence #{index} has probability zero")]
    ZeroConsequence { index: usize },
    #[error(transparent)]
    Probability(#[from] ProbabilityError),
}
