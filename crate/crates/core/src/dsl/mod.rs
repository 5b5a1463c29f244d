//! Expression language for combination formulas.
//!
//! ```text
//! expr   := term (( "(+)" | "(-)" ) term)*
//! term   := factor ("*" factor)*
//! factor := "~" factor | number | ident "(" expr ("," expr)* ")" | "(" expr ")"
//! ```
//!
//! `(+)` is cMPE addition and `(-)` DPE subtraction; they share one precedence
//! level and associate left. Same-operator chains fold into one n-ary node, so
//! `a (-) b (-) c` is a single subtraction with two subtrahends. Plain `+` and
//! `-` are rejected by the lexer. Functions: `bayes(prior, likelihood,
//! alt_likelihood)`, `laplace(successes, trials)` and `broad(prior, c1, ...)`.

mod ast;
mod eval;
mod lexer;
mod parser;

pub use ast::{Expr, ExprKind, Function};
pub use eval::{evaluate, EvalError, EvalErrorKind};
pub use lexer::{tokenize, LexError, Token, TokenKind};
pub use parser::{parse, ParseError};

use serde::Serialize;
use thiserror::Error;

/// Byte range `[start, end)` in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn to(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SyntaxError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl SyntaxError {
    pub fn span(&self) -> Span {
        match self {
            SyntaxError::Lex(e) => e.span,
            SyntaxError::Parse(e) => e.span,
        }
    }
}

/// Tokenizes and parses `input`.
pub fn parse_str(input: &str) -> Result<Expr, SyntaxError> {
    let tokens = tokenize(input)?;
    Ok(parse(&tokens)?)
}
