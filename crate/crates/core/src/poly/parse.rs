//! Weight-expression grammar.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | atom ('^' int)?
//! atom   := int ['/' int] | decimal | 'i' | 'z' | 'w' | 'x' | 'y' | '(' expr ')'
//! ```
//!
//! `z` is the holomorphic variable and `w` its conjugate placeholder. The real
//! coordinates `x = (z + w)/2` and `y = (z − w)/(2i)` are accepted as sugar.
//! Decimal literals become exact rationals over their literal denominator.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::bipoly::BiPoly;
use super::gaussian::GaussianRational;
use crate::error::{Error, Result};

/// Largest total degree a parsed expression may reach.
pub const MAX_DEGREE: u32 = 512;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(String),
    Dec(String, String),
    Slash,
    I,
    Z,
    W,
    X,
    Y,
    Caret,
    Star,
    Plus,
    Minus,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let c = bytes[pos] as char;
        if c.is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        let start = pos;
        let tok = match c {
            '0'..='9' | '.' => {
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                let int_part = &text[start..pos];
                if pos < bytes.len() && bytes[pos] == b'.' {
                    pos += 1;
                    let fstart = pos;
                    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    let frac = &text[fstart..pos];
                    if int_part.is_empty() && frac.is_empty() {
                        return Err(Error::Parse { pos: start, msg: "lone '.'".into() });
                    }
                    out.push((start, Tok::Dec(int_part.to_string(), frac.to_string())));
                } else {
                    out.push((start, Tok::Int(int_part.to_string())));
                }
                continue;
            }
            '/' => Tok::Slash,
            'i' => Tok::I,
            'z' => Tok::Z,
            'w' => Tok::W,
            'x' => Tok::X,
            'y' => Tok::Y,
            '^' => Tok::Caret,
            '*' => Tok::Star,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => {
                return Err(Error::Parse { pos, msg: format!("unexpected character '{other}'") });
            }
        };
        out.push((start, tok));
        pos += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|t| t.0).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|t| t.1.clone());
        self.at += 1;
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<BiPoly> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                -self.term()?
            }
            Some(Tok::Plus) => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<BiPoly> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            let start = self.pos();
            acc = &acc * &self.factor()?;
            check_degree(&acc, start)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<BiPoly> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            return Ok(-self.factor()?);
        }
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        let e = match self.bump() {
            Some(Tok::Int(s)) => s.parse::<u32>().map_err(|_| Error::ExponentOverflow { pos })?,
            _ => return Err(Error::Parse { pos, msg: "expected integer exponent".into() }),
        };
        let deg = base.degree().unwrap_or(0) as u64 * e as u64;
        if deg > MAX_DEGREE as u64 {
            return Err(Error::ExponentOverflow { pos });
        }
        Ok(base.pow(e))
    }

    fn atom(&mut self) -> Result<BiPoly> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(n)) => {
                let num: BigInt = n.parse().map_err(|_| Error::Parse { pos, msg: "bad integer".into() })?;
                if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    let dpos = self.pos();
                    let den: BigInt = match self.bump() {
                        Some(Tok::Int(d)) => d.parse().map_err(|_| Error::Parse { pos: dpos, msg: "bad integer".into() })?,
                        _ => return Err(Error::Parse { pos: dpos, msg: "expected integer denominator".into() }),
                    };
                    if den.is_zero() {
                        return Err(Error::Parse { pos: dpos, msg: "zero denominator".into() });
                    }
                    return Ok(BiPoly::constant(GaussianRational::real(BigRational::new(num, den))));
                }
                Ok(BiPoly::constant(GaussianRational::real(BigRational::from_integer(num))))
            }
            Some(Tok::Dec(int, frac)) => {
                let digits = format!("{}{}", if int.is_empty() { "0" } else { &int }, frac);
                let num: BigInt = digits.parse().map_err(|_| Error::Parse { pos, msg: "bad decimal".into() })?;
                let den = num_traits::pow(BigInt::from(10), frac.len());
                Ok(BiPoly::constant(GaussianRational::real(BigRational::new(num, den))))
            }
            Some(Tok::I) => Ok(BiPoly::constant(GaussianRational::i())),
            Some(Tok::Z) => Ok(BiPoly::z()),
            Some(Tok::W) => Ok(BiPoly::w()),
            Some(Tok::X) => {
                let half = GaussianRational::from_ratio(1, 2);
                Ok((&BiPoly::z() + &BiPoly::w()).scale(&half))
            }
            Some(Tok::Y) => {
                // (z − w)/(2i) = −i/2·(z − w)
                let c = GaussianRational::new(BigRational::zero(), -BigRational::one() / BigRational::from_integer(2.into()));
                Ok((&BiPoly::z() - &BiPoly::w()).scale(&c))
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                if self.bump() != Some(Tok::RParen) {
                    return Err(Error::Parse { pos: self.pos().saturating_sub(1), msg: "expected ')'".into() });
                }
                Ok(inner)
            }
            Some(t) => Err(Error::Parse { pos, msg: format!("unexpected token {t:?}") }),
            None => self.err("unexpected end of input"),
        }
    }
}

fn check_degree(p: &BiPoly, pos: usize) -> Result<()> {
    if p.degree().unwrap_or(0) > MAX_DEGREE {
        return Err(Error::ExponentOverflow { pos });
    }
    Ok(())
}

/// Parse a weight expression into an exact polynomial.
pub fn parse_poly(text: &str) -> Result<BiPoly> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(Error::Parse { pos: 0, msg: "empty expression".into() });
    }
    let mut p = Parser { toks, at: 0, end: text.len() };
    let out = p.expr()?;
    if p.at < p.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}
