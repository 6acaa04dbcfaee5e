//! Parser for the text form written by `Display for WeylPoly<UPoly>`.
//!
//! Grammar (juxtaposition is multiplication, in the order written, so
//! `b a` parses to `a b + u`):
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*'? factor)*
//! factor := atom ['^' integer]
//! atom   := number | 'i' | 'u' | 'a' | 'b' | '(' expr ')'
//! number := digits ['/' digits]
//! ```

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::algebra::WeylPoly;
use super::gauss::GaussRational;
use super::poly::UPoly;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Int(u32),
    I,
    U,
    A,
    B,
    Caret,
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let digits = |i: &mut usize| -> String {
        let start = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        chars[start..*i].iter().collect()
    };
    while i < chars.len() {
        let ch = chars[i];
        match ch {
            c if c.is_whitespace() => i += 1,
            c if c.is_ascii_digit() => {
                let num = digits(&mut i);
                if out.last() == Some(&Tok::Caret) {
                    let e = num
                        .parse::<u32>()
                        .map_err(|_| Error::Parse(format!("exponent '{num}' too large")))?;
                    out.push(Tok::Int(e));
                    continue;
                }
                let n: BigInt = num.parse().expect("digits");
                let mut q = BigRational::from_integer(n);
                if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                    i += 1;
                    let den: BigInt = digits(&mut i).parse().expect("digits");
                    if den.is_zero() {
                        return Err(Error::Parse("zero denominator".into()));
                    }
                    q /= BigRational::from_integer(den);
                }
                out.push(Tok::Num(q));
            }
            _ => {
                out.push(match ch {
                    'i' => Tok::I,
                    'u' => Tok::U,
                    'a' | 'A' => Tok::A,
                    'b' | 'B' => Tok::B,
                    '^' => Tok::Caret,
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    other => return Err(Error::Parse(format!("unexpected character '{other}'"))),
                });
                i += 1;
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

type Poly = WeylPoly<UPoly>;

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut neg = false;
        match self.peek() {
            Some(Tok::Minus) => {
                neg = true;
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        let mut acc = Poly::zero();
        loop {
            let t = self.term()?;
            acc = if neg { acc.sub(&t) } else { acc.add(&t) };
            match self.peek() {
                Some(Tok::Plus) => neg = false,
                Some(Tok::Minus) => neg = true,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(Tok::Num(_) | Tok::I | Tok::U | Tok::A | Tok::B | Tok::LParen) => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.next() {
                Some(Tok::Int(e)) => return Ok(base.pow(e)),
                other => return Err(Error::Parse(format!("expected exponent, found {other:?}"))),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        let scalar = |g: GaussRational| Poly::scalar(UPoly::constant(g));
        match self.next() {
            Some(Tok::Num(q)) => Ok(scalar(GaussRational::real(q))),
            Some(Tok::I) => Ok(scalar(GaussRational::i())),
            Some(Tok::U) => Ok(Poly::scalar(UPoly::u_pow(1))),
            Some(Tok::A) => Ok(Poly::a()),
            Some(Tok::B) => Ok(Poly::b()),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(e),
                    other => Err(Error::Parse(format!("expected ')', found {other:?}"))),
                }
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

impl FromStr for WeylPoly<UPoly> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let toks = lex(s)?;
        if toks.is_empty() {
            return Err(Error::Parse("empty expression".into()));
        }
        let mut p = Parser { toks, pos: 0 };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
        }
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::algebra::{normal_order, WeylWord};
    use crate::weyl::poly::Coeff;
    use proptest::prelude::*;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    #[test]
    fn parses_canonical_text() {
        let q = p("a^2 b^2 + 4u a b + 2u^2");
        assert_eq!(q, normal_order(&"BBAA".parse::<WeylWord>().unwrap()));
        assert_eq!(p("b a"), p("a b + u"));
        assert_eq!(p("0"), Poly::zero());
        let half_iu = Poly::scalar(UPoly::monomial(GaussRational::i(), 1)).scale(&UPoly::constant(GaussRational::from_ratio(1, 2)));
        assert_eq!(p("1/2iu"), half_iu);
        assert_eq!(p("1/2iu"), Poly::scalar(UPoly::monomial(GaussRational::i().pow(1).clone(), 1)).scale(&UPoly::constant(GaussRational::from_ratio(1, 2))));
        for bad in ["", "a +", "(a", "a^", "x", "1/0"] {
            assert!(bad.parse::<Poly>().is_err(), "{bad}");
        }
    }

    fn gauss() -> impl Strategy<Value = GaussRational> {
        (-9i64..=9, 1i64..=4, -9i64..=9, 1i64..=4).prop_map(|(a, b, c, d)| {
            GaussRational::new(
                BigRational::new(a.into(), b.into()),
                BigRational::new(c.into(), d.into()),
            )
        })
    }

    fn upoly() -> impl Strategy<Value = UPoly> {
        prop::collection::vec((gauss(), 0u32..4), 1..3).prop_map(|ts| {
            ts.into_iter()
                .fold(UPoly::zero(), |acc, (c, k)| acc.add(&UPoly::monomial(c, k)))
        })
    }

    fn weyl() -> impl Strategy<Value = Poly> {
        prop::collection::vec((upoly(), 0u32..4, 0u32..4), 0..5).prop_map(|ts| {
            ts.into_iter()
                .fold(Poly::zero(), |acc, (c, i, j)| acc.add(&Poly::term(c, i, j)))
        })
    }

    proptest! {
        #[test]
        fn display_round_trips(q in weyl()) {
            let text = q.to_string();
            let back: Poly = text.parse().unwrap();
            prop_assert_eq!(back, q, "{}", text);
        }
    }
}
