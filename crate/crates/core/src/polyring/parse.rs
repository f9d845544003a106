//! Text syntax: `3*x^2*y - 1/2*z + 4`, with parentheses allowed.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::poly::{Polynomial, Ring};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1
            }
            '*' => {
                out.push(Tok::Star);
                i += 1
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                out.push(Tok::Num(digits.parse().expect("digits")));
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(Error::Parse(format!("unexpected character `{other}` in `{s}`"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a Ring,
    toks: Vec<Tok>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} in `{}`", self.src))
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                -&self.term()?
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

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.power()?;
        while let Some(Tok::Star) = self.peek() {
            self.bump();
            acc = &acc * &self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            match self.bump() {
                Some(Tok::Num(n)) => {
                    let e: u32 = n.try_into().map_err(|_| self.err("exponent too large"))?;
                    return Ok(base.pow(e));
                }
                _ => return Err(self.err("expected integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.bump() {
            Some(Tok::Num(n)) => {
                let q = if let Some(Tok::Slash) = self.peek() {
                    self.bump();
                    match self.bump() {
                        Some(Tok::Num(d)) if d != BigInt::from(0) => BigRational::new(n, d),
                        _ => return Err(self.err("expected nonzero denominator")),
                    }
                } else {
                    BigRational::from_integer(n)
                };
                Ok(self.ring.constant(self.ring.field().from_rational(&q)?))
            }
            Some(Tok::Ident(name)) => self
                .ring
                .var(&name)
                .map_err(|_| self.err(&format!("unknown variable `{name}`"))),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(self.err("expected `)`")),
                }
            }
            Some(Tok::Minus) => Ok(-&self.atom()?),
            _ => Err(self.err("unexpected end of input")),
        }
    }
}

pub fn parse_polynomial(ring: &Ring, s: &str) -> Result<Polynomial> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut p = Parser { ring, toks, pos: 0, src: s };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use crate::polyring::{Field, OrderKind, PolyRing};

    #[test]
    fn canonical_round_trip() {
        let r = PolyRing::new(&["x", "y", "z"], Field::Rational, OrderKind::Degrevlex).unwrap();
        let s = "3*x^2*y - 1/2*z + 4";
        let p = r.parse(s).unwrap();
        assert_eq!(p.to_string(), s);
        assert_eq!(r.parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn parenthesized_input() {
        let r = PolyRing::new(&["x", "y"], Field::Rational, OrderKind::Degrevlex).unwrap();
        assert_eq!(r.parse("(x - y)*(x + y)").unwrap().to_string(), "x^2 - y^2");
        assert_eq!(r.parse("-(x)^2").unwrap().to_string(), "-x^2");
    }

    #[test]
    fn errors() {
        let r = PolyRing::new(&["x"], Field::Rational, OrderKind::Degrevlex).unwrap();
        assert!(r.parse("x +").is_err());
        assert!(r.parse("w").is_err());
        assert!(r.parse("1/0").is_err());
        assert!(r.parse("x $ 2").is_err());
        assert!(r.parse("").is_err());
    }
}
