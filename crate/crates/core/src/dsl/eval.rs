use thiserror::Error;

use super::ast::{Expr, ExprKind, Function};
use super::Span;
use crate::combinators::{
    bayes_implied, bayes_posterior, cmpe_add, dpe_sub, laplace_succession, mpe_error_product,
};
use crate::diagnostics::broad_chain;
use crate::error::CombineError;
use crate::prob::{product, Probability, RepresentationMode};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalErrorKind {
    #[error(transparent)]
    Combine(#[from] CombineError),
    #[error("a count is only valid as a `laplace` argument")]
    MisplacedCount,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{kind}")]
pub struct EvalError {
    pub kind: EvalErrorKind,
    pub span: Span,
}

fn at(span: Span) -> impl Fn(CombineError) -> EvalError {
    move |e| EvalError {
        kind: EvalErrorKind::Combine(e),
        span,
    }
}

/// Evaluates an expression with every literal and operator in `mode`.
///
/// `*` goes through [`mpe_error_product`], so a floating product that
/// underflows is an error rather than a silent zero. `broad(...)` yields the
/// chain ratio when it is a probability and a [`CombineError::ChainOverflow`]
/// when it is not.
pub fn evaluate(expr: &Expr, mode: RepresentationMode) -> Result<Probability, EvalError> {
    let err = at(expr.span);
    match &expr.kind {
        ExprKind::Literal(v) => Ok(Probability::from_rational(v.clone())
            .map_err(|e| err(e.into()))?
            .to_mode(mode)),
        ExprKind::Count(_) => Err(EvalError {
            kind: EvalErrorKind::MisplacedCount,
            span: expr.span,
        }),
        ExprKind::Complement(child) => Ok(evaluate(child, mode)?.complement()),
        ExprKind::Product(children) => {
            mpe_error_product(&evaluate_all(children, mode)?).map_err(err)
        }
        ExprKind::CmpeAdd(children) => cmpe_add(&evaluate_all(children, mode)?).map_err(err),
        ExprKind::DpeSub {
            minuend,
            subtrahends,
        } => {
            let m = evaluate(minuend, mode)?;
            let subs = evaluate_all(subtrahends, mode)?;
            dpe_sub(&m, &subs).map_err(err)
        }
        ExprKind::Call { function, args } => call(*function, args, mode, expr.span),
    }
}

fn evaluate_all(exprs: &[Expr], mode: RepresentationMode) -> Result<Vec<Probability>, EvalError> {
    exprs.iter().map(|e| evaluate(e, mode)).collect()
}

fn call(
    function: Function,
    args: &[Expr],
    mode: RepresentationMode,
    span: Span,
) -> Result<Probability, EvalError> {
    let err = at(span);
    if function == Function::Laplace {
        return match args {
            [Expr {
                kind: ExprKind::Count(m),
                ..
            }, Expr {
                kind: ExprKind::Count(n),
                ..
            }] => laplace_succession(*m, *n, mode).map_err(err),
            _ => Err(EvalError {
                kind: EvalErrorKind::MisplacedCount,
                span,
            }),
        };
    }
    let values = evaluate_all(args, mode)?;
    if function == Function::Bayes {
        return bayes_posterior(&values[0], &values[1], &values[2]).map_err(err);
    }
    let (prior, consequences) = values.split_first().expect("parser enforces arity");
    let report = broad_chain(prior, consequences).map_err(&err)?;
    if let Some(index) = report.overflow_index {
        return Err(err(CombineError::ChainOverflow {
            raw_value: report.raw_value,
            index,
        }));
    }
    product(consequences)
        .and_then(|denominator| bayes_implied(prior, &denominator))
        .map_err(err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_str;

    fn eval(s: &str, mode: RepresentationMode) -> Result<Probability, EvalError> {
        evaluate(&parse_str(s).unwrap(), mode)
    }

    fn exact(s: &str) -> Probability {
        eval(s, RepresentationMode::ExactRational).unwrap()
    }

    fn r(n: i64, d: i64) -> Probability {
        Probability::from_ratio(n, d).unwrap()
    }

    #[test]
    fn reference_expressions() {
        assert_eq!(exact("0.6 (+) 0.4 (+) 0.5"), r(22, 25));
        assert!(exact("~0").is_one());
        assert_eq!(exact("laplace(50, 50) (+) laplace(50, 50)"), r(2703, 2704));
        assert_eq!(exact("0.5 (-) 0.1"), r(4, 9));
        assert_eq!(exact("bayes(0.5, 0.6, 0.8)"), r(3, 7));
        assert_eq!(exact("broad(0.5, 0.8, 0.8, 0.8)"), r(125, 128));
        assert_eq!(exact("~0.25 * ~0.25"), r(9, 16));
        let f = eval("0.6 (+) 0.4 (+) 0.5", RepresentationMode::Floating).unwrap();
        assert!((f.value() - 0.88).abs() < 1e-12);
    }

    #[test]
    fn evaluation_matches_direct_calls() {
        let direct = cmpe_add(&[r(3, 5), r(2, 5), r(1, 2)]).unwrap();
        assert_eq!(exact("0.6 (+) 0.4 (+) 0.5"), direct);
        let direct = dpe_sub(&r(9, 10), &[r(1, 10), r(1, 5)]).unwrap();
        assert_eq!(exact("0.9 (-) 0.1 (-) 0.2"), direct);
    }

    #[test]
    fn errors_carry_node_spans() {
        let err = eval("0.2 (+) (0.1 (-) 0.5)", RepresentationMode::Floating).unwrap_err();
        assert_eq!(
            err.kind,
            EvalErrorKind::Combine(CombineError::SubtrahendExceedsMinuend)
        );
        assert_eq!(err.span, Span::new(8, 21));
        let err = eval(
            "broad(0.5, 0.8, 0.8, 0.8, 0.8)",
            RepresentationMode::Floating,
        )
        .unwrap_err();
        assert!(matches!(
            err.kind,
            EvalErrorKind::Combine(CombineError::ChainOverflow { index: 4, .. })
        ));
        let err = eval("1e-200 * 1e-200", RepresentationMode::Floating).unwrap_err();
        assert_eq!(err.kind, EvalErrorKind::Combine(CombineError::Underflow));
        assert!(eval("1e-200 * 1e-200", RepresentationMode::LogComplement).is_ok());
    }

    #[test]
    fn modes_agree() {
        let s = "bayes(0.3, 0.9, 0.2) (+) ~0.4 * 0.7 (-) laplace(3, 5)";
        let exact = eval(s, RepresentationMode::ExactRational).unwrap();
        for mode in [
            RepresentationMode::Floating,
            RepresentationMode::LogComplement,
        ] {
            let v = eval(s, mode).unwrap();
            assert_eq!(v.mode(), mode);
            assert!((v.value() - exact.value()).abs() < 1e-12);
        }
    }
}
