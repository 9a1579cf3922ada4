//! Recursive-descent parser for polynomial and form strings.
//!
//! Polynomials: rational literals (`3/2`), variables, `+ - * ^` and
//! parentheses; negative powers only of units. Forms additionally accept
//! `d(x)` or `dx` for the differential of a ring variable; `*`, `^` between
//! forms and juxtaposition all mean wedge, while `^` followed by an integer
//! is a power.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::exactring::{LocalizedPoly, Ring, RingError};
use crate::forms::DiffForm;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, RingError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        let tok = match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            c if c.is_ascii_digit() => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Num(src[start..i].parse().unwrap())));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            other => {
                return Err(RingError::Parse {
                    pos: i,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a Arc<Ring>,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    allow_forms: bool,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, RingError> {
        Err(RingError::Parse {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<DiffForm, RingError> {
        let mut acc = DiffForm::zero(self.ring);
        let mut first = true;
        loop {
            let negate = match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    false
                }
                Some(Tok::Minus) => {
                    self.bump();
                    true
                }
                _ if first => false,
                _ => break,
            };
            let t = self.term()?;
            acc = if negate { &acc - &t } else { &acc + &t };
            first = false;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<DiffForm, RingError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                }
                Some(Tok::Ident(_) | Tok::Num(_) | Tok::LParen) => {}
                _ => break,
            }
            let rhs = self.power()?;
            acc = acc.wedge(&rhs);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<DiffForm, RingError> {
        let mut base = self.atom()?;
        while self.peek() == Some(&Tok::Caret) {
            self.bump();
            let exponent = match (self.peek(), self.peek_at(1)) {
                (Some(Tok::Num(_)), _) => {
                    let Some(Tok::Num(n)) = self.bump() else { unreachable!() };
                    Some(n)
                }
                (Some(Tok::Minus), Some(Tok::Num(_))) => {
                    self.bump();
                    let Some(Tok::Num(n)) = self.bump() else { unreachable!() };
                    Some(-n)
                }
                _ => None,
            };
            match exponent {
                Some(k) => {
                    let k = match k.to_i32() {
                        Some(k) => k,
                        None => return self.err("exponent out of range"),
                    };
                    let f = match base.as_function() {
                        Some(f) => f,
                        None => return self.err("power of a form of positive degree"),
                    };
                    let powered = match f.pow(k) {
                        Ok(p) => p,
                        Err(_) => {
                            return self.err(format!("negative power of non-unit `{f}`"));
                        }
                    };
                    base = powered.into();
                }
                None => {
                    let rhs = self.atom()?;
                    base = base.wedge(&rhs);
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<DiffForm, RingError> {
        match self.bump() {
            Some(Tok::Num(n)) => {
                let mut value = BigRational::from_integer(n);
                if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    match self.bump() {
                        Some(Tok::Num(d)) if !d.is_zero() => {
                            value /= BigRational::from_integer(d);
                        }
                        _ => {
                            self.pos -= 1;
                            return self.err("expected nonzero denominator");
                        }
                    }
                }
                Ok(LocalizedPoly::constant(self.ring, value).into())
            }
            Some(Tok::Ident(name)) => self.identifier(name),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                if self.bump() != Some(Tok::RParen) {
                    self.pos -= 1;
                    return self.err("expected `)`");
                }
                Ok(inner)
            }
            Some(Tok::Minus) => {
                let inner = self.atom()?;
                Ok(-&inner)
            }
            _ => {
                self.pos = self.pos.saturating_sub(1);
                self.err("expected a number, variable or `(`")
            }
        }
    }

    fn identifier(&mut self, name: String) -> Result<DiffForm, RingError> {
        if let Ok(idx) = self.ring.index_of(&name) {
            return Ok(LocalizedPoly::var(self.ring, idx).into());
        }
        if self.allow_forms {
            if name == "d" && self.peek() == Some(&Tok::LParen) {
                if let (Some(Tok::Ident(v)), Some(Tok::RParen)) = (self.peek_at(1), self.peek_at(2)) {
                    let idx = self.ring.index_of(v)?;
                    self.pos += 3;
                    return Ok(DiffForm::dvar(self.ring, idx));
                }
            }
            if let Some(rest) = name.strip_prefix('d') {
                if let Ok(idx) = self.ring.index_of(rest) {
                    return Ok(DiffForm::dvar(self.ring, idx));
                }
            }
        }
        Err(RingError::UnknownVariable(name))
    }
}

fn run(ring: &Arc<Ring>, src: &str, allow_forms: bool) -> Result<DiffForm, RingError> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(RingError::Parse {
            pos: 0,
            msg: "empty expression".into(),
        });
    }
    let mut p = Parser {
        ring,
        toks,
        pos: 0,
        end: src.len(),
        allow_forms,
    };
    let value = p.expr()?;
    if p.pos < p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(value)
}

pub fn parse_poly(ring: &Arc<Ring>, src: &str) -> Result<LocalizedPoly, RingError> {
    run(ring, src, false).map(|f| f.as_function().expect("no differentials without forms"))
}

pub fn parse_form(ring: &Arc<Ring>, src: &str) -> Result<DiffForm, RingError> {
    run(ring, src, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::rational;

    #[test]
    fn rational_literals_and_precedence() {
        let r = Ring::polynomial(["x", "y"]).unwrap();
        let p = parse_poly(&r, "3/2*x^2 - (x + y)*(x - y)").unwrap();
        assert_eq!(p, parse_poly(&r, "1/2*x^2 + y^2").unwrap());
        assert_eq!(
            parse_poly(&r, "-3/4").unwrap().constant_value(),
            Some(rational(-3, 4))
        );
    }

    #[test]
    fn unknown_variable_is_named() {
        let r = Ring::polynomial(["x", "y"]).unwrap();
        assert_eq!(
            parse_poly(&r, "x + z").unwrap_err(),
            RingError::UnknownVariable("z".into())
        );
    }

    #[test]
    fn differentials_rejected_in_polynomials() {
        let r = Ring::polynomial(["x"]).unwrap();
        assert!(parse_poly(&r, "dx").is_err());
    }

    #[test]
    fn differential_spellings_agree() {
        let r = Ring::polynomial(["x", "y"]).unwrap();
        let a = parse_form(&r, "2*x * d(x) ^ d(y)").unwrap();
        let b = parse_form(&r, "2*x dx^dy").unwrap();
        let c = parse_form(&r, "-2*x dy*dx").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn negative_power_of_unit_monomial() {
        let r = Ring::new(["x", "y"], ["x", "y"]).unwrap();
        assert_eq!(
            parse_poly(&r, "(x*y)^-1").unwrap(),
            parse_poly(&r, "x^-1*y^-1").unwrap()
        );
        let r2 = Ring::new(["x"], ["x"]).unwrap();
        assert!(parse_poly(&r2, "(x+1)^-1").is_err());
    }

    #[test]
    fn garbage_is_rejected() {
        let r = Ring::polynomial(["x"]).unwrap();
        for bad in ["", "x +", "(x", "x)", "3/0", "x # 2", "x^^2"] {
            assert!(parse_poly(&r, bad).is_err(), "{bad:?}");
        }
    }
}
