//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar, in decreasing precedence:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := ('-' | '+')* atom ('^' uint)?
//! atom   := number | variable | '(' expr ')'
//! number := uint ('/' uint)?
//! ```
//!
//! There is no implicit multiplication: `2x1` is a parse error, `2*x1` is not.
//! Exponents are nonnegative integer literals. Unary minus is accepted so that
//! printed polynomials such as `-x1+1` round-trip. Errors carry 1-based line
//! and column positions.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::context::VarContext;
use crate::error::{Error, Result};
use crate::poly::Polynomial;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

fn tokenize(text: &str, line0: usize, col0: usize) -> Result<Vec<Spanned>> {
    let mut toks = Vec::new();
    let mut line = line0;
    let mut col = col0;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                chars.next();
                col += 1;
                let tok = match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    _ => Tok::RParen,
                };
                toks.push(Spanned { tok, line: tl, col: tc });
            }
            c if c.is_ascii_digit() => {
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                let n = digits.parse::<BigInt>().expect("digit string");
                toks.push(Spanned { tok: Tok::Int(n), line: tl, col: tc });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        name.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                toks.push(Spanned { tok: Tok::Ident(name), line: tl, col: tc });
            }
            other => return Err(err(line, col, format!("unexpected character `{other}`"))),
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    ctx: &'a Arc<VarContext>,
    end_line: usize,
    end_col: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (usize, usize) {
        self.peek()
            .map(|s| (s.line, s.col))
            .unwrap_or((self.end_line, self.end_col))
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        while let Some(s) = self.peek() {
            match s.tok {
                Tok::Plus => {
                    self.next();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.next();
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while let Some(s) = self.peek() {
            if s.tok == Tok::Star {
                self.next();
                acc = acc.mul(&self.factor()?);
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let mut negate = false;
        while let Some(s) = self.peek() {
            match s.tok {
                Tok::Minus => {
                    negate = !negate;
                    self.next();
                }
                Tok::Plus => {
                    self.next();
                }
                _ => break,
            }
        }
        let mut base = self.atom()?;
        if let Some(s) = self.peek() {
            if s.tok == Tok::Caret {
                self.next();
                let (l, c) = self.here();
                match self.next() {
                    Some(Spanned { tok: Tok::Int(n), .. }) => {
                        let e = u32::try_from(&n)
                            .map_err(|_| err(l, c, format!("exponent {n} too large")))?;
                        base = base.pow(e);
                    }
                    Some(Spanned { tok: Tok::Minus, line, col }) => {
                        return Err(err(line, col, "negative exponent"));
                    }
                    _ => return Err(err(l, c, "expected integer exponent after `^`")),
                }
            }
        }
        Ok(if negate { base.neg() } else { base })
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let (l, c) = self.here();
        match self.next() {
            Some(Spanned { tok: Tok::Int(n), line, col }) => {
                // a following `/` with an integer makes a rational literal
                if matches!(self.peek(), Some(s) if s.tok == Tok::Slash) {
                    self.next();
                    let (dl, dc) = self.here();
                    match self.next() {
                        Some(Spanned { tok: Tok::Int(d), .. }) => {
                            let s = self
                                .ctx
                                .field()
                                .ratio(&n, &d)
                                .map_err(|e| err(line, col, e.to_string()))?;
                            Ok(Polynomial::constant(self.ctx, s))
                        }
                        _ => Err(err(dl, dc, "expected integer denominator after `/`")),
                    }
                } else {
                    Ok(Polynomial::constant(self.ctx, self.ctx.field().from_bigint(&n)))
                }
            }
            Some(Spanned { tok: Tok::Ident(name), line, col }) => {
                match self.ctx.index_of(&name) {
                    Some(idx) => Polynomial::variable(self.ctx, idx),
                    None => Err(err(line, col, format!("unknown variable `{name}`"))),
                }
            }
            Some(Spanned { tok: Tok::LParen, line, col }) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Spanned { tok: Tok::RParen, .. }) => Ok(inner),
                    _ => Err(err(line, col, "unclosed parenthesis")),
                }
            }
            Some(Spanned { tok, line, col }) => {
                Err(err(line, col, format!("unexpected token `{tok:?}`")))
            }
            None => Err(err(l, c, "unexpected end of expression")),
        }
    }
}

/// Parses a single polynomial expression in the given context.
pub fn parse_polynomial(text: &str, ctx: &Arc<VarContext>) -> Result<Polynomial> {
    parse_polynomial_at(text, ctx, 1, 1)
}

/// Like [`parse_polynomial`] but reporting positions relative to a containing
/// document: `line0`/`col0` locate the first character of `text`.
pub fn parse_polynomial_at(
    text: &str,
    ctx: &Arc<VarContext>,
    line0: usize,
    col0: usize,
) -> Result<Polynomial> {
    let toks = tokenize(text, line0, col0)?;
    if toks.is_empty() {
        return Err(err(line0, col0, "empty expression"));
    }
    let end_col = col0 + text.chars().count();
    let mut parser = Parser { toks, pos: 0, ctx, end_line: line0, end_col };
    let poly = parser.expr()?;
    if let Some(extra) = parser.peek() {
        return Err(err(
            extra.line,
            extra.col,
            format!("unexpected trailing input at token {:?}", extra.tok),
        ));
    }
    Ok(poly)
}
