//! Tokenizer and recursive-descent parser for polynomial text.
//!
//! ```text
//! poly   := term (('+'|'-') term)*
//! term   := coef ('*' factor)* | factor ('*' factor)*
//! factor := ident ('^' nat)? | '(' poly ')'
//! coef   := int ('/' nat)?
//! ```
//!
//! A single leading sign is also accepted so that printed polynomials such as
//! `-x + 1` read back. The same tokenizer drives the task-file parser.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::{Polynomial, RingRef};

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 64;
/// Largest number of terms a parsed polynomial may expand to.
pub const MAX_TERMS: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Equals,
    Newline,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Caret => write!(f, "`^`"),
            Tok::Slash => write!(f, "`/`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::LBracket => write!(f, "`[`"),
            Tok::RBracket => write!(f, "`]`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::Equals => write!(f, "`=`"),
            Tok::Newline => write!(f, "end of line"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

/// Splits text into tokens. Newlines are significant only outside brackets
/// and parentheses; `#` starts a comment running to the end of the line.
pub fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let push = |out: &mut Vec<Token>, tok| out.push(Token { tok, line: l0, column: c0 });
        if c == '\n' {
            if depth == 0 {
                push(&mut out, Tok::Newline);
            }
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
                col += 1;
            }
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
                col += 1;
            }
            if i - start > 200 {
                return Err(Error::Parse { line: l0, column: c0, message: "integer literal too long".into() });
            }
            let s: String = chars[start..i].iter().collect();
            push(&mut out, Tok::Int(s.parse().expect("digits")));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
                col += 1;
            }
            push(&mut out, Tok::Ident(chars[start..i].iter().collect()));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            '(' => {
                depth += 1;
                Tok::LParen
            }
            ')' => {
                depth = depth.saturating_sub(1);
                Tok::RParen
            }
            '[' => {
                depth += 1;
                Tok::LBracket
            }
            ']' => {
                depth = depth.saturating_sub(1);
                Tok::RBracket
            }
            ',' => Tok::Comma,
            ':' => Tok::Colon,
            '=' => Tok::Equals,
            ';' => Tok::Newline,
            other => {
                return Err(Error::Parse { line: l0, column: c0, message: format!("unexpected character `{other}`") })
            }
        };
        push(&mut out, tok);
        i += 1;
        col += 1;
    }
    out.push(Token { tok: Tok::Eof, line, column: col });
    Ok(out)
}

/// Position-tracking cursor over a token list.
pub struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(toks: &'a [Token]) -> Self {
        Cursor { toks, pos: 0 }
    }

    pub fn peek(&self) -> &Token {
        &self.toks[self.pos.min(self.toks.len() - 1)]
    }

    pub fn peek_tok(&self) -> &Tok {
        &self.peek().tok
    }

    pub fn bump(&mut self) -> Token {
        let t = self.peek().clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek_tok() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn error<T>(&self, expected: &str) -> Result<T> {
        let t = self.peek();
        Err(Error::Parse { line: t.line, column: t.column, message: format!("expected {expected}, found {}", t.tok) })
    }

    pub fn error_at<T>(&self, t: &Token, message: String) -> Result<T> {
        Err(Error::Parse { line: t.line, column: t.column, message })
    }

    pub fn expect(&mut self, tok: &Tok) -> Result<Token> {
        if self.peek_tok() == tok {
            Ok(self.bump())
        } else {
            self.error(&tok.to_string())
        }
    }

    pub fn expect_ident(&mut self) -> Result<(String, Token)> {
        match self.peek_tok().clone() {
            Tok::Ident(s) => Ok((s, self.bump())),
            _ => self.error("identifier"),
        }
    }

    pub fn expect_nat(&mut self) -> Result<(BigInt, Token)> {
        match self.peek_tok().clone() {
            Tok::Int(n) => Ok((n, self.bump())),
            _ => self.error("natural number"),
        }
    }

    /// Signed integer that must fit in an `i64`.
    pub fn expect_int(&mut self) -> Result<i64> {
        let neg = self.eat(&Tok::Minus);
        if !neg {
            self.eat(&Tok::Plus);
        }
        let (n, t) = self.expect_nat()?;
        let v = n.to_i64().filter(|v| v.abs() <= 1_000_000);
        match v {
            Some(v) => Ok(if neg { -v } else { v }),
            None => self.error_at(&t, format!("integer {n} out of range")),
        }
    }

    pub fn at_end_of_statement(&self) -> bool {
        matches!(self.peek_tok(), Tok::Newline | Tok::Eof)
    }

    /// Parses a polynomial starting at the cursor.
    pub fn polynomial(&mut self, ring: &RingRef) -> Result<Polynomial> {
        let first = self.peek().clone();
        let mut acc = match self.peek_tok() {
            Tok::Minus => {
                self.bump();
                self.term(ring)?.neg()
            }
            Tok::Plus => {
                self.bump();
                self.term(ring)?
            }
            _ => self.term(ring)?,
        };
        loop {
            match self.peek_tok() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term(ring)?)?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.term(ring)?)?;
                }
                _ => break,
            }
            self.check_size(&acc, &first)?;
        }
        Ok(acc)
    }

    fn check_size(&self, p: &Polynomial, at: &Token) -> Result<()> {
        if p.terms().len() > MAX_TERMS {
            return self.error_at(at, format!("polynomial expands to more than {MAX_TERMS} terms"));
        }
        if p.terms().iter().any(|(m, _)| m.total_exponent() > 4 * MAX_EXPONENT as u64) {
            return self.error_at(at, "polynomial degree too large".into());
        }
        Ok(())
    }

    fn term(&mut self, ring: &RingRef) -> Result<Polynomial> {
        let start = self.peek().clone();
        let mut acc = if let Tok::Int(_) = self.peek_tok() {
            let (num, _) = self.expect_nat()?;
            let den = if self.eat(&Tok::Slash) {
                let (d, dt) = self.expect_nat()?;
                if d.is_zero() {
                    return self.error_at(&dt, "zero denominator".into());
                }
                d
            } else {
                BigInt::from(1)
            };
            let c = ring.field().from_fraction(&num, &den).or_else(|e| self.error_at(&start, e.to_string()))?;
            Polynomial::constant(ring, c)
        } else {
            self.factor(ring)?
        };
        while self.eat(&Tok::Star) {
            let f = self.factor(ring)?;
            acc = acc.mul(&f)?;
            self.check_size(&acc, &start)?;
        }
        Ok(acc)
    }

    fn factor(&mut self, ring: &RingRef) -> Result<Polynomial> {
        match self.peek_tok().clone() {
            Tok::Ident(name) => {
                let t = self.bump();
                let Some(i) = ring.var_index(&name) else {
                    return self.error_at(&t, format!("unknown variable `{name}` in {ring}"));
                };
                let mut e = 1u32;
                if self.eat(&Tok::Caret) {
                    let (n, nt) = self.expect_nat()?;
                    match n.to_u32().filter(|v| *v <= MAX_EXPONENT) {
                        Some(v) => e = v,
                        None => return self.error_at(&nt, format!("exponent {n} exceeds {MAX_EXPONENT}")),
                    }
                }
                Ok(Polynomial::term(ring, ring.field().one(), ring.var_monomial(i, e)))
            }
            Tok::LParen => {
                self.bump();
                let p = self.polynomial(ring)?;
                self.expect(&Tok::RParen)?;
                Ok(p)
            }
            _ => self.error("variable, `(` or coefficient"),
        }
    }
}

/// Parses a complete polynomial from text.
pub fn parse_polynomial(ring: &RingRef, text: &str) -> Result<Polynomial> {
    let toks = tokenize(text)?;
    let mut cur = Cursor::new(&toks);
    let p = cur.polynomial(ring)?;
    if !matches!(cur.peek_tok(), Tok::Eof | Tok::Newline) {
        return cur.error("operator or end of input");
    }
    Ok(p)
}
