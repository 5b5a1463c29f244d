use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use super::ast::{Expr, ExprKind, Function};
use super::lexer::{Token, TokenKind};
use super::Span;
use crate::prob::parse_decimal;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at byte {}", span.start)]
pub struct ParseError {
    pub message: String,
    pub span: Span,
}

pub fn parse(tokens: &[Token]) -> Result<Expr, ParseError> {
    let mut parser = Parser { tokens, pos: 0 };
    let expr = parser.expr()?;
    if let Some(tok) = parser.peek() {
        return Err(ParseError {
            message: format!(
                "expected an operator or end of input, found `{}`",
                tok.lexeme
            ),
            span: tok.span,
        });
    }
    Ok(expr)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek_kind(&self) -> Option<TokenKind> {
        self.peek().map(|t| t.kind)
    }

    fn end_span(&self) -> Span {
        let end = self.tokens.last().map_or(0, |t| t.span.end);
        Span::new(end, end)
    }

    fn error(&self, expected: &str) -> ParseError {
        match self.peek() {
            Some(tok) => ParseError {
                message: format!("expected {expected}, found `{}`", tok.lexeme),
                span: tok.span,
            },
            None => ParseError {
                message: format!("expected {expected}, found end of input"),
                span: self.end_span(),
            },
        }
    }

    fn expect(&mut self, kind: TokenKind, expected: &str) -> Result<&'a Token, ParseError> {
        match self.peek() {
            Some(tok) if tok.kind == kind => {
                self.pos += 1;
                Ok(tok)
            }
            _ => Err(self.error(expected)),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        // whether `acc` is a chain node built by this loop (parenthesized
        // groups are never extended)
        let mut folded = false;
        while let Some(op @ (TokenKind::CmpeOp | TokenKind::DpeOp)) = self.peek_kind() {
            self.pos += 1;
            let rhs = self.term()?;
            let span = acc.span.to(rhs.span);
            match (op, &mut acc.kind) {
                (TokenKind::CmpeOp, ExprKind::CmpeAdd(children)) if folded => children.push(rhs),
                (TokenKind::DpeOp, ExprKind::DpeSub { subtrahends, .. }) if folded => {
                    subtrahends.push(rhs)
                }
                (TokenKind::CmpeOp, _) => {
                    acc = Expr::new(ExprKind::CmpeAdd(vec![acc, rhs]), span);
                }
                _ => {
                    acc = Expr::new(
                        ExprKind::DpeSub {
                            minuend: Box::new(acc),
                            subtrahends: vec![rhs],
                        },
                        span,
                    );
                }
            }
            acc.span = span;
            folded = true;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let first = self.factor()?;
        if self.peek_kind() != Some(TokenKind::Star) {
            return Ok(first);
        }
        let mut children = vec![first];
        while self.peek_kind() == Some(TokenKind::Star) {
            self.pos += 1;
            children.push(self.factor()?);
        }
        let span = children[0].span.to(children[children.len() - 1].span);
        Ok(Expr::new(ExprKind::Product(children), span))
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let Some(tok) = self.peek() else {
            return Err(self.error("an expression"));
        };
        match tok.kind {
            TokenKind::Tilde => {
                self.pos += 1;
                let child = self.factor()?;
                let span = tok.span.to(child.span);
                Ok(Expr::new(ExprKind::Complement(Box::new(child)), span))
            }
            TokenKind::Number => {
                self.pos += 1;
                let value = literal(tok)?;
                Ok(Expr::new(ExprKind::Literal(value), tok.span))
            }
            TokenKind::LParen => {
                self.pos += 1;
                let mut inner = self.expr()?;
                let close = self.expect(TokenKind::RParen, "`)`")?;
                inner.span = tok.span.to(close.span);
                Ok(inner)
            }
            TokenKind::Ident => {
                self.pos += 1;
                self.call(tok)
            }
            _ => Err(self.error("an expression")),
        }
    }

    fn call(&mut self, name: &'a Token) -> Result<Expr, ParseError> {
        let function = Function::from_name(&name.lexeme).ok_or_else(|| ParseError {
            message: format!(
                "unknown function `{}`; expected `bayes`, `laplace` or `broad`",
                name.lexeme
            ),
            span: name.span,
        })?;
        self.expect(TokenKind::LParen, "`(` after function name")?;
        let mut args = Vec::new();
        loop {
            args.push(match function {
                Function::Laplace => self.count()?,
                _ => self.expr()?,
            });
            if self.peek_kind() == Some(TokenKind::Comma) {
                self.pos += 1;
            } else {
                break;
            }
        }
        let close = self.expect(TokenKind::RParen, "`,` or `)`")?;
        let span = name.span.to(close.span);
        let arity_ok = match function {
            Function::Bayes => args.len() == 3,
            Function::Laplace => args.len() == 2,
            Function::Broad => args.len() >= 2,
        };
        if !arity_ok {
            let wanted = match function {
                Function::Bayes => "3 arguments (prior, likelihood, alt_likelihood)",
                Function::Laplace => "2 arguments (successes, trials)",
                Function::Broad => "a prior and at least one consequence",
            };
            return Err(ParseError {
                message: format!("`{}` takes {wanted}, got {}", function.name(), args.len()),
                span,
            });
        }
        if let [Expr {
            kind: ExprKind::Count(m),
            ..
        }, Expr {
            kind: ExprKind::Count(n),
            span: n_span,
        }] = args.as_slice()
        {
            if m > n {
                return Err(ParseError {
                    message: format!("{m} successes exceed {n} trials"),
                    span: *n_span,
                });
            }
        }
        Ok(Expr::new(ExprKind::Call { function, args }, span))
    }

    fn count(&mut self) -> Result<Expr, ParseError> {
        let tok = self.expect(TokenKind::Number, "a count")?;
        let n = tok
            .lexeme
            .bytes()
            .all(|b| b.is_ascii_digit())
            .then(|| tok.lexeme.parse::<u64>().ok())
            .flatten()
            .ok_or_else(|| ParseError {
                message: format!("`{}` is not a non-negative integer count", tok.lexeme),
                span: tok.span,
            })?;
        Ok(Expr::new(ExprKind::Count(n), tok.span))
    }
}

fn literal(tok: &Token) -> Result<BigRational, ParseError> {
    let value = parse_decimal(&tok.lexeme).map_err(|e| ParseError {
        message: e.to_string(),
        span: tok.span,
    })?;
    if value > BigRational::one() {
        return Err(ParseError {
            message: format!("literal {} is not a probability in [0, 1]", tok.lexeme),
            span: tok.span,
        });
    }
    Ok(value)
}
