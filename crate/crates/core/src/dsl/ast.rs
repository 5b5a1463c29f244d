use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Function {
    /// `bayes(prior, likelihood, alt_likelihood)`
    Bayes,
    /// `laplace(successes, trials)`, both integer counts
    Laplace,
    /// `broad(prior, c1, c2, ...)`
    Broad,
}

impl Function {
    pub fn from_name(name: &str) -> Option<Function> {
        match name {
            "bayes" => Some(Function::Bayes),
            "laplace" => Some(Function::Laplace),
            "broad" => Some(Function::Broad),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Function::Bayes => "bayes",
            Function::Laplace => "laplace",
            Function::Broad => "broad",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    /// Exact value of a decimal literal in `[0, 1]`.
    Literal(BigRational),
    /// Integer count; only appears as a `laplace` argument.
    Count(u64),
    Complement(Box<Expr>),
    Product(Vec<Expr>),
    CmpeAdd(Vec<Expr>),
    DpeSub {
        minuend: Box<Expr>,
        subtrahends: Vec<Expr>,
    },
    Call {
        function: Function,
        args: Vec<Expr>,
    },
}

/// Expression node with its source span. Equality ignores spans.
#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Self {
        Expr { kind, span }
    }

    fn is_chain(&self) -> bool {
        matches!(self.kind, ExprKind::CmpeAdd(_) | ExprKind::DpeSub { .. })
    }

    fn is_binary(&self) -> bool {
        self.is_chain() || matches!(self.kind, ExprKind::Product(_))
    }
}

fn write_grouped(f: &mut fmt::Formatter<'_>, e: &Expr, group: bool) -> fmt::Result {
    if group {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

fn write_joined(
    f: &mut fmt::Formatter<'_>,
    items: &[Expr],
    sep: &str,
    group: fn(&Expr) -> bool,
) -> fmt::Result {
    for (i, e) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write_grouped(f, e, group(e))?;
    }
    Ok(())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Literal(v) => f.write_str(&format_decimal(v)),
            ExprKind::Count(n) => write!(f, "{n}"),
            ExprKind::Complement(child) => {
                f.write_str("~")?;
                write_grouped(f, child, child.is_binary())
            }
            ExprKind::Product(children) => write_joined(f, children, " * ", Expr::is_binary),
            ExprKind::CmpeAdd(children) => write_joined(f, children, " (+) ", Expr::is_chain),
            ExprKind::DpeSub {
                minuend,
                subtrahends,
            } => {
                write_grouped(f, minuend, minuend.is_chain())?;
                f.write_str(" (-) ")?;
                write_joined(f, subtrahends, " (-) ", Expr::is_chain)
            }
            ExprKind::Call { function, args } => {
                write!(f, "{}(", function.name())?;
                write_joined(f, args, ", ", |_| false)?;
                f.write_str(")")
            }
        }
    }
}

/// Exact decimal text for a rational whose denominator divides a power of ten.
/// Long runs of leading zeros switch to `De-k` notation.
pub(crate) fn format_decimal(v: &BigRational) -> String {
    let mut denom = v.denom().clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let mut scale = 0usize;
    let mut numer = v.numer().clone();
    // scale numerator so that the denominator becomes 10^scale
    while !denom.is_one() {
        if denom.is_even() {
            denom /= &two;
            numer *= &five;
        } else if (&denom % &five).is_zero() {
            denom /= &five;
            numer *= &two;
        } else {
            // not a terminating decimal; unreachable for parsed literals
            return format!("{}", num_traits::ToPrimitive::to_f64(v).unwrap_or(f64::NAN));
        }
        scale += 1;
    }
    let mut digits = numer.to_string();
    while scale > 0 && digits.len() > 1 && digits.ends_with('0') {
        digits.pop();
        scale -= 1;
    }
    if scale == 0 {
        return digits;
    }
    if scale > digits.len() + 6 {
        return format!("{digits}e-{scale}");
    }
    if digits.len() > scale {
        let (int, frac) = digits.split_at(digits.len() - scale);
        format!("{int}.{frac}")
    } else {
        format!("0.{}{digits}", "0".repeat(scale - digits.len()))
    }
}
