use std::fmt;

use super::monomial::Monomial;
use super::polynomial::{Poly, Vars};
use super::PolyError;
use crate::scalar::{Rational, Scalar};

impl<C: Scalar> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let names = self.vars().names();
        for (k, (m, c)) in self.terms().iter().enumerate() {
            let s = c.to_string();
            let (neg, mag) = match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            };
            match (k == 0, neg) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            if mag != "1" || m.is_one() {
                factors.push(mag);
            }
            for (i, name) in names.iter().enumerate() {
                match m.exp(i) {
                    0 => {}
                    1 => factors.push(name.clone()),
                    e => factors.push(format!("{name}^{e}")),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl<C: Scalar> Poly<C> {
    /// Parse the polynomial text grammar over the given variables.
    ///
    /// Accepts `+ - * ^`, parentheses and rational literals `n/m`; the
    /// divisor of `/` must evaluate to a nonzero constant.
    pub fn parse(text: &str, vars: &Vars) -> Result<Self, PolyError> {
        let mut p = Parser { src: text.as_bytes(), pos: 0, vars };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected character"));
        }
        Ok(out)
    }
}

/// Parse over `x, y, z, w`, then drop `w` when it does not occur.
pub fn parse_auto(text: &str) -> Result<Poly<Rational>, PolyError> {
    let p = Poly::<Rational>::parse(text, &Vars::xyzw())?;
    if p.is_free_of(3) {
        p.restrict(&Vars::xyz())
    } else {
        Ok(p)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a Vars,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: &str) -> PolyError {
        PolyError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr<C: Scalar>(&mut self) -> Result<Poly<C>, PolyError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -self.term()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term<C: Scalar>(&mut self) -> Result<Poly<C>, PolyError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.power::<C>()?;
                    if !d.is_constant() || d.is_zero() {
                        self.pos = at;
                        return Err(self.error("divisor must be a nonzero constant"));
                    }
                    acc = acc.scale(&d.constant_term().inv());
                }
                // Implicit multiplication such as `2x` or `x y`.
                Some(c) if c.is_ascii_alphanumeric() || c == b'(' => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power<C: Scalar>(&mut self) -> Result<Poly<C>, PolyError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.error("expected exponent"));
            }
            let e: u32 = std::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| self.error("exponent too large"))?;
            if e > 1000 {
                return Err(self.error("exponent too large"));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom<C: Scalar>(&mut self) -> Result<Poly<C>, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let q: Rational = digits.parse().map_err(|_| self.error("bad number"))?;
                let c = C::from_rational(&q).ok_or_else(|| self.error("coefficient not representable"))?;
                Ok(Poly::constant(self.vars, c))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.vars.index(name) {
                    Ok(i) => Ok(Poly::monomial(self.vars, Monomial::var(i, 1), C::one())),
                    Err(_) => {
                        self.pos = start;
                        Err(self.error(&format!("unknown variable '{name}'")))
                    }
                }
            }
            None => Err(self.error("unexpected end of input")),
            Some(_) => Err(self.error("unexpected character")),
        }
    }
}
