use serde::Serialize;
use thiserror::Error;

use super::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TokenKind {
    Number,
    CmpeOp,
    DpeOp,
    Star,
    Tilde,
    LParen,
    RParen,
    Comma,
    Ident,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at byte {}", span.start)]
pub struct LexError {
    pub message: String,
    pub span: Span,
}

fn lex_error(message: impl Into<String>, start: usize, end: usize) -> LexError {
    LexError {
        message: message.into(),
        span: Span::new(start, end),
    }
}

pub fn tokenize(input: &str) -> Result<Vec<Token>, LexError> {
    let bytes = input.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let kind = match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                i = scan_number(bytes, i)?;
                TokenKind::Number
            }
            b'.' if bytes.get(i + 1).is_some_and(u8::is_ascii_digit) => {
                i = scan_number(bytes, i)?;
                TokenKind::Number
            }
            b'(' => match bytes.get(i + 1) {
                Some(&op @ (b'+' | b'-')) => {
                    if bytes.get(i + 2) != Some(&b')') {
                        return Err(lex_error(
                            format!(
                                "malformed operator `({}`, expected `({})`",
                                op as char, op as char
                            ),
                            i,
                            i + 2,
                        ));
                    }
                    i += 3;
                    if op == b'+' {
                        TokenKind::CmpeOp
                    } else {
                        TokenKind::DpeOp
                    }
                }
                _ => {
                    i += 1;
                    TokenKind::LParen
                }
            },
            b')' => {
                i += 1;
                TokenKind::RParen
            }
            b',' => {
                i += 1;
                TokenKind::Comma
            }
            b'*' => {
                i += 1;
                TokenKind::Star
            }
            b'~' => {
                i += 1;
                TokenKind::Tilde
            }
            b'+' | b'-' => {
                let (op, word) = if b == b'+' {
                    ("(+)", "addition")
                } else {
                    ("(-)", "subtraction")
                };
                return Err(lex_error(
                    format!("linear {word} of probabilities is not supported; use `{op}`"),
                    i,
                    i + 1,
                ));
            }
            b if b.is_ascii_alphabetic() || b == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                TokenKind::Ident
            }
            _ => {
                let ch = input[i..].chars().next().expect("char boundary");
                return Err(lex_error(
                    format!("unexpected character `{ch}`"),
                    i,
                    i + ch.len_utf8(),
                ));
            }
        };
        tokens.push(Token {
            kind,
            lexeme: input[start..i].to_string(),
            span: Span::new(start, i),
        });
    }
    Ok(tokens)
}

fn scan_number(bytes: &[u8], start: usize) -> Result<usize, LexError> {
    let mut i = start;
    let digits = |i: &mut usize| {
        while *i < bytes.len() && bytes[*i].is_ascii_digit() {
            *i += 1;
        }
    };
    digits(&mut i);
    if bytes.get(i) == Some(&b'.') {
        i += 1;
        digits(&mut i);
    }
    if matches!(bytes.get(i), Some(b'e' | b'E')) {
        let mut j = i + 1;
        if matches!(bytes.get(j), Some(b'+' | b'-')) {
            j += 1;
        }
        if !bytes.get(j).is_some_and(u8::is_ascii_digit) {
            return Err(lex_error(
                "exponent without digits",
                start,
                j.min(bytes.len()),
            ));
        }
        i = j;
        digits(&mut i);
    }
    Ok(i)
}
