// SPDX-License-Identifier: MIT OR Apache-2.0

//! Recursive-descent reader for arithmetic expressions in named variables.
//!
//! Grammar (whitespace ignored):
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := power (('*'|'/') power)*
//! power  := atom ['^' ['-'] integer]
//! atom   := integer | name | '(' expr ')'
//! ```

use super::polynomial::{is_identifier, Polynomial, Universe};
use super::rational::RationalFunction;
use super::PolyError;
use num_bigint::BigInt;

struct Reader<'a> {
    src: &'a [u8],
    pos: usize,
    universe: &'a Universe,
}

impl Reader<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error(&self, what: &str) -> PolyError {
        PolyError::Parse(format!("{what} at offset {}", self.pos))
    }

    fn expr(&mut self) -> Result<RationalFunction, PolyError> {
        let n = self.universe.len();
        let mut acc = RationalFunction::zero(n);
        let mut first = true;
        loop {
            let negative = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                _ if first => false,
                _ => break,
            };
            let t = self.term()?;
            acc = if negative { acc.sub(&t) } else { acc.add(&t) };
            first = false;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunction, PolyError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    acc = acc.div(&self.power()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<RationalFunction, PolyError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let digits = self.digits();
        let e: i32 = digits.parse().map_err(|_| self.error("bad exponent"))?;
        base.pow(if negative { -e } else { e })
    }

    fn digits(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<RationalFunction, PolyError> {
        let n = self.universe.len();
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
                let digits = self.digits();
                let v: BigInt = digits.parse().map_err(|_| self.error("bad integer"))?;
                Ok(RationalFunction::from_polynomial(Polynomial::constant(n, v)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                debug_assert!(is_identifier(name));
                let v = self
                    .universe
                    .index(name)
                    .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
                Ok(RationalFunction::var(n, v))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Parses an arbitrary rational expression.
pub fn parse_rational(text: &str, universe: &Universe) -> Result<RationalFunction, PolyError> {
    let mut reader = Reader { src: text.as_bytes(), pos: 0, universe };
    if reader.peek().is_none() {
        return Err(PolyError::Parse("empty input".into()));
    }
    let value = reader.expr()?;
    if reader.peek().is_some() {
        return Err(reader.error("trailing input"));
    }
    Ok(value)
}

/// Parses an expression that must denote a polynomial.
pub fn parse_polynomial(text: &str, universe: &Universe) -> Result<Polynomial, PolyError> {
    let value = parse_rational(text, universe)?;
    if !value.den().is_one() {
        return Err(PolyError::Parse(format!("{text:?} is not a polynomial")));
    }
    Ok(value.num().clone())
}
