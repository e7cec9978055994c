//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | identifier | '(' expr ')'
//! ```

use std::sync::Arc;

use num_bigint::BigInt;

use super::monomial::Monomial;
use super::polynomial::Polynomial;
use super::ring::RingSpec;
use super::scalar::Scalar;
use super::PolyError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, PolyError> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(text[start..i].parse().expect("digits")), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(PolyError::Syntax { offset: start, message: format!("unexpected character '{ch}'") });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    ring: &'a Arc<RingSpec>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Syntax { offset: self.offset(), message: message.into() })
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    return self.err("implicit multiplication is not allowed; use '*'");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial, PolyError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial, PolyError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        match self.peek().cloned() {
            Some(Tok::Int(e)) => {
                self.pos += 1;
                let e: u32 = e.try_into().map_err(|_| PolyError::Syntax {
                    offset: self.toks[self.pos - 1].1,
                    message: "exponent too large".into(),
                })?;
                if self.peek() == Some(&Tok::Caret) {
                    return self.err("chained exponents are ambiguous; add parentheses");
                }
                Ok(base.pow(e))
            }
            Some(Tok::Minus) => Err(PolyError::NegativeExponent { offset: self.offset() }),
            _ => self.err("expected a nonnegative integer exponent"),
        }
    }

    fn atom(&mut self) -> Result<Polynomial, PolyError> {
        let off = self.offset();
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(Polynomial::constant(self.ring, Scalar::from_bigint(v)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(i) = self.ring.var_index(&name) {
                    Ok(Polynomial::var(self.ring, i))
                } else if self.ring.parameter() == Some(name.as_str()) {
                    Ok(Polynomial::constant(self.ring, Scalar::param()))
                } else {
                    Err(PolyError::UnknownIdentifier { name, offset: off })
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(t) => self.err(format!("unexpected token {}", describe(&t))),
            None => self.err("unexpected end of input"),
        }
    }
}

fn describe(t: &Tok) -> &'static str {
    match t {
        Tok::Int(_) => "integer",
        Tok::Ident(_) => "identifier",
        Tok::Plus => "'+'",
        Tok::Minus => "'-'",
        Tok::Star => "'*'",
        Tok::Caret => "'^'",
        Tok::LParen => "'('",
        Tok::RParen => "')'",
    }
}

/// Parse `text` into a polynomial over `ring`.
pub fn parse_polynomial(text: &str, ring: &Arc<RingSpec>) -> Result<Polynomial, PolyError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len(), ring };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err(format!("unexpected token {}", describe(&p.toks[p.pos].0)));
    }
    Ok(e)
}

/// Parse a product `a*b*c` keeping the top-level factors separate. Used for
/// excluded loci, where the vanishing factor is reported.
pub fn parse_factors(text: &str, ring: &Arc<RingSpec>) -> Result<Vec<Polynomial>, PolyError> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '*' if depth == 0 => {
                parts.push((start, &text[start..i]));
                start = i + 1;
            }
            '+' | '-' if depth == 0 && !text[start..i].trim().is_empty() => {
                // top-level sum: not a product, keep whole
                return Ok(vec![parse_polynomial(text, ring)?]);
            }
            _ => {}
        }
    }
    parts.push((start, &text[start..]));
    let mut out = Vec::new();
    for (off, s) in parts {
        let p = parse_polynomial(s, ring).map_err(|e| e.shifted(off))?;
        out.push(p);
    }
    Ok(out)
}

/// Parse a vector field written with basis symbols `e1 .. ep`, for example
/// `y*z*e1 + x*z*e2`. Each term must contain exactly one basis symbol.
pub fn parse_vector_field(text: &str, ring: &Arc<RingSpec>, p: usize) -> Result<Vec<Polynomial>, PolyError> {
    let mut names: Vec<String> = ring.variables().to_vec();
    for j in 1..=p {
        let e = format!("e{j}");
        if ring.var_index(&e).is_some() {
            return Err(PolyError::DuplicateName(e));
        }
        names.push(e);
    }
    let ext = ring.with_variables(names)?;
    let poly = parse_polynomial(text, &ext)?;
    let n = ring.nvars();
    let mut comps = vec![Vec::new(); p];
    for (m, c) in poly.terms() {
        let e = m.exponents();
        let tail = &e[n..];
        let deg: u32 = tail.iter().map(|&x| x as u32).sum();
        if deg != 1 {
            return Err(PolyError::Syntax {
                offset: 0,
                message: "each term of a vector field needs exactly one basis symbol e1..ep".into(),
            });
        }
        let j = tail.iter().position(|&x| x == 1).expect("one basis symbol");
        comps[j].push((Monomial::new(e[..n].to_vec()), c.clone()));
    }
    Ok(comps.into_iter().map(|t| Polynomial::from_terms(ring, t)).collect())
}
