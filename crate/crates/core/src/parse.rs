//! Text grammar for polynomials:
//!
//! ```text
//! poly   := ("+"|"-")? term (("+"|"-") term)*
//! term   := rational ("*" varpow)* | varpow ("*" varpow)*
//! varpow := ident ("^" uint)?
//! rational := int ("/" uint)?
//! ```
//!
//! Whitespace is insignificant. A leading sign is accepted so that every
//! printed polynomial parses back.

use alloc::string::{String, ToString};
use alloc::vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Poly, Vars};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a Vars,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Syntax { pos: self.pos, msg: msg.to_string() })
    }

    fn uint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        let s = core::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse::<BigInt>().unwrap())
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        if !self.src.get(self.pos).is_some_and(|c| c.is_ascii_alphabetic()) {
            return self.err("expected identifier");
        }
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        Ok(core::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string())
    }

    fn varpow(&mut self, exps: &mut [u32]) -> Result<()> {
        let at = self.pos;
        let name = self.ident()?;
        let idx = match self.vars.index_of(&name) {
            Some(i) => i,
            None => {
                self.pos = at;
                return Err(Error::UnknownVariable(name));
            }
        };
        let mut e = 1u32;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let k = self.uint()?;
            e = match u32::try_from(k) {
                Ok(k) => k,
                Err(_) => return self.err("exponent too large"),
            };
        }
        exps[idx] += e;
        Ok(())
    }

    fn term(&mut self) -> Result<Poly> {
        let mut exps = vec![0u32; self.vars.len()];
        let mut coeff = BigRational::one();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.uint()?;
                let mut d = BigInt::one();
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    d = self.uint()?;
                    if d.is_zero() {
                        return self.err("zero denominator");
                    }
                }
                coeff = BigRational::new(n, d);
            }
            Some(c) if c.is_ascii_alphabetic() => self.varpow(&mut exps)?,
            _ => return self.err("expected a number or a variable"),
        }
        while self.peek() == Some(b'*') {
            self.pos += 1;
            self.varpow(&mut exps)?;
        }
        Ok(Poly::monomial(self.vars, exps, coeff))
    }

    fn poly(&mut self) -> Result<Poly> {
        let mut acc = Poly::zero(self.vars);
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                negate = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        loop {
            let t = self.term()?;
            acc = if negate { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(b'+') => {
                    negate = false;
                    self.pos += 1;
                }
                Some(b'-') => {
                    negate = true;
                    self.pos += 1;
                }
                None => return Ok(acc),
                Some(_) => return self.err("expected `+`, `-`, `*` or end of input"),
            }
        }
    }
}

/// Parses `text` as a polynomial over `vars`.
pub fn parse_poly(text: &str, vars: &Vars) -> Result<Poly> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, vars };
    p.poly()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};

    fn xy() -> Vars {
        Vars::new(&["x", "y"])
    }

    #[test]
    fn literals() {
        let v = xy();
        assert!(parse_poly("0", &v).unwrap().is_zero());
        let p = parse_poly("x^2+y^2", &v).unwrap();
        assert_eq!(p.coefficient(&[2, 0]), int(1));
        assert_eq!(p.coefficient(&[0, 2]), int(1));
        assert_eq!(p.num_terms(), 2);
        let q = parse_poly("1/3*x*y - 2", &v).unwrap();
        assert_eq!(q.coefficient(&[1, 1]), rat(1, 3));
        assert_eq!(q.constant_term(), int(-2));
        assert_eq!(q.num_terms(), 2);
    }

    #[test]
    fn whitespace_and_repeats() {
        let v = xy();
        let p = parse_poly("  x * x ^ 2 - 3 * y + x^3 ", &v).unwrap();
        assert_eq!(p.coefficient(&[3, 0]), int(2));
        assert_eq!(p.coefficient(&[0, 1]), int(-3));
    }

    #[test]
    fn errors() {
        let v = xy();
        match parse_poly("x + + y", &v) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert_eq!(parse_poly("x + w", &v), Err(Error::UnknownVariable("w".into())));
        assert!(matches!(parse_poly("1/0", &v), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("", &v), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("x y", &v), Err(Error::Syntax { .. })));
    }
}
