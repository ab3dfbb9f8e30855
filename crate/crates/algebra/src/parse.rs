use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{AlgebraError, Result};
use crate::fraction::Fraction;
use crate::monomial::Monomial;
use crate::poly::Poly;
use crate::vars::VarTable;
use crate::Rational;

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

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(text[start..i].parse().expect("digits"))));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                return Err(AlgebraError::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{}`", text[start..].chars().next().unwrap()),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    table: &'a Arc<VarTable>,
    /// Allow `/` between arbitrary factors.
    fractions: bool,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(AlgebraError::Syntax { pos: self.offset(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<Fraction> {
        let negate = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Fraction> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(Tok::Slash) if self.fractions => {
                    self.pos += 1;
                    let at = self.offset();
                    let d = self.factor()?;
                    acc = acc.div(&d).map_err(|_| AlgebraError::Syntax { pos: at, msg: "division by zero".into() })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn nat(&mut self) -> Result<BigInt> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(n)
            }
            _ => self.err("expected a natural number"),
        }
    }

    fn factor(&mut self) -> Result<Fraction> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let mut value = Rational::from_integer(n);
                if !self.fractions && self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    let at = self.offset();
                    let d = self.nat()?;
                    if d.is_zero() {
                        return Err(AlgebraError::Syntax { pos: at, msg: "zero denominator".into() });
                    }
                    value /= Rational::from_integer(d);
                }
                Ok(Fraction::from_poly(Poly::constant(self.table, value)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let Some(i) = self.table.position(&name) else {
                    return Err(AlgebraError::UnknownIdentifier { name, pos: at });
                };
                let mut exp = 1u32;
                if self.peek() == Some(&Tok::Caret) {
                    self.pos += 1;
                    let at = self.offset();
                    let n = self.nat()?;
                    exp = u32::try_from(n).map_err(|_| AlgebraError::Syntax { pos: at, msg: "exponent too large".into() })?;
                }
                let mut e = vec![0; self.table.len()];
                e[i] = exp;
                Ok(Fraction::from_poly(Poly::monomial(self.table, Monomial::from_exponents(e), Rational::one())))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => self.err("expected a number, identifier or `(`"),
            None => self.err("unexpected end of input"),
        }
    }
}

fn run(text: &str, table: &Arc<VarTable>, fractions: bool) -> Result<Fraction> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len(), table, fractions };
    let value = p.expr()?;
    if p.pos < p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(value)
}

/// Parses a polynomial in the text grammar over `table`.
///
/// ```
/// use unistab_algebra::{parse_poly, VarTable};
/// let t = VarTable::from_pairs(&[("e", 1), ("f1", 1)]);
/// let p = parse_poly("3/2*e^2 - f1", &t).unwrap();
/// assert_eq!(p.to_string(), "3/2*e^2 - f1");
/// ```
pub fn parse_poly(text: &str, table: &Arc<VarTable>) -> Result<Poly> {
    let f = run(text, table, false)?;
    Ok(f.as_poly().cloned().expect("polynomial grammar has constant denominators"))
}

/// Parses a rational function: the polynomial grammar with `/` also allowed
/// between arbitrary factors, e.g. `e^2/(a11*a21)`.
pub fn parse_fraction(text: &str, table: &Arc<VarTable>) -> Result<Fraction> {
    run(text, table, true)
}

fn write_rational(f: &mut fmt::Formatter<'_>, c: &Rational) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let table = self.table();
        for (k, (m, c)) in self.terms().iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            match (k, sign) {
                (0, "-") => write!(f, "-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            let c = c.abs();
            if m.is_one() {
                write_rational(f, &c)?;
                continue;
            }
            if !c.is_one() {
                write_rational(f, &c)?;
                write!(f, "*")?;
            }
            let mut first = true;
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "{}", table.name(i))?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}
