use consilience::dsl::{evaluate, parse_str, tokenize, Expr, ExprKind, Function, Span};
use consilience::{cmpe_add, Probability, RepresentationMode, Tolerance};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn node(kind: ExprKind) -> Expr {
    Expr::new(kind, Span::new(0, 0))
}

fn literal() -> impl Strategy<Value = Expr> {
    (0u32..=4, 0u64..=10_000).prop_map(|(digits, raw)| {
        let scale = 10u64.pow(digits);
        let n = raw % (scale + 1);
        node(ExprKind::Literal(BigRational::new(
            BigInt::from(n),
            BigInt::from(scale),
        )))
    })
}

fn laplace() -> impl Strategy<Value = Expr> {
    (0u64..=500)
        .prop_flat_map(|n| (0..=n, Just(n)))
        .prop_map(|(m, n)| {
            node(ExprKind::Call {
                function: Function::Laplace,
                args: vec![node(ExprKind::Count(m)), node(ExprKind::Count(n))],
            })
        })
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![4 => literal(), 1 => laplace()];
    leaf.prop_recursive(5, 48, 4, |inner| {
        prop_oneof![
            inner
                .clone()
                .prop_map(|e| node(ExprKind::Complement(Box::new(e)))),
            prop::collection::vec(inner.clone(), 2..4).prop_map(|v| node(ExprKind::Product(v))),
            prop::collection::vec(inner.clone(), 2..4).prop_map(|v| node(ExprKind::CmpeAdd(v))),
            (inner.clone(), prop::collection::vec(inner.clone(), 1..3)).prop_map(|(m, s)| {
                node(ExprKind::DpeSub {
                    minuend: Box::new(m),
                    subtrahends: s,
                })
            }),
            prop::collection::vec(inner.clone(), 3..=3).prop_map(|args| node(ExprKind::Call {
                function: Function::Bayes,
                args,
            })),
            prop::collection::vec(inner, 2..4).prop_map(|args| node(ExprKind::Call {
                function: Function::Broad,
                args,
            })),
        ]
    })
}

fn spans_within(e: &Expr, len: usize) -> bool {
    let ok = e.span.start <= e.span.end && e.span.end <= len;
    let children: Vec<&Expr> = match &e.kind {
        ExprKind::Literal(_) | ExprKind::Count(_) => vec![],
        ExprKind::Complement(x) => vec![x],
        ExprKind::Product(v) | ExprKind::CmpeAdd(v) | ExprKind::Call { args: v, .. } => {
            v.iter().collect()
        }
        ExprKind::DpeSub {
            minuend,
            subtrahends,
        } => std::iter::once(&**minuend).chain(subtrahends).collect(),
    };
    ok && children
        .iter()
        .all(|c| c.span.start >= e.span.start && c.span.end <= e.span.end && spans_within(c, len))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn printed_expressions_parse_back(e in expr()) {
        let text = e.to_string();
        let parsed = parse_str(&text).unwrap_or_else(|err| panic!("{text}: {err}"));
        prop_assert_eq!(&parsed, &e, "{}", text);
        prop_assert!(spans_within(&parsed, text.len()));
        prop_assert_eq!(parsed.span, Span::new(0, text.len()));
    }

    #[test]
    fn error_spans_stay_inside_the_input(s in "[0-9.()~*,+\\- a-z]{0,24}") {
        if let Err(err) = parse_str(&s) {
            let span = err.span();
            prop_assert!(span.start <= span.end && span.end <= s.len(), "{:?} in {:?}", span, s);
        }
    }

    #[test]
    fn tokens_cover_every_non_blank_byte(e in expr(), gaps in prop::collection::vec(0usize..3, 64)) {
        let mut text = String::new();
        for (i, t) in tokenize(&e.to_string()).unwrap().iter().enumerate() {
            text.push_str(&" ".repeat(gaps[i % gaps.len()]));
            text.push_str(&t.lexeme);
        }
        let tokens = tokenize(&text).unwrap();
        let mut covered = vec![false; text.len()];
        let mut last_end = 0;
        for t in &tokens {
            prop_assert!(t.span.start >= last_end);
            prop_assert_eq!(&text[t.span.start..t.span.end], t.lexeme.as_str());
            covered[t.span.start..t.span.end].iter_mut().for_each(|c| *c = true);
            last_end = t.span.end;
        }
        for (i, b) in text.bytes().enumerate() {
            prop_assert_eq!(covered[i], !b.is_ascii_whitespace());
        }
    }

    #[test]
    fn evaluation_matches_direct_calls(a in 0i64..=100, b in 0i64..100) {
        let (pa, pb) = (
            Probability::from_ratio(a, 100).unwrap(),
            Probability::from_ratio(b, 100).unwrap(),
        );
        let show = |p: &Probability| node(ExprKind::Literal(p.to_rational())).to_string();
        for mode in [RepresentationMode::ExactRational, RepresentationMode::Floating] {
            let sum = evaluate(&parse_str(&format!("{} (+) {}", show(&pa), show(&pb))).unwrap(), mode).unwrap();
            let direct = cmpe_add(&[pa.to_mode(mode), pb.to_mode(mode)]).unwrap();
            prop_assert!(sum.approx_eq(&direct, Tolerance(1e-15)));
            let exact_sum = cmpe_add(&[pa.clone(), pb.clone()]).unwrap();
            let back = evaluate(&parse_str(&format!("{} (-) {}", show(&exact_sum), show(&pb))).unwrap(), mode).unwrap();
            prop_assert!(back.approx_eq(&pa, Tolerance(1e-12)));
        }
    }
}
