//! Recursive-descent parser for rational-function expressions.
//!
//! ```text
//! expr    := ['-'] term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := base ('^' ['-'] integer)?
//! base    := literal | 'x' | '(' expr ')'
//! literal := integer ('/' positive-integer)?
//! ```

use num_bigint::BigInt;
use num_traits::Zero;

use super::ratfunc::RatFunc;
use crate::algebra::Q;
use crate::error::{Error, Result};

pub fn parse(input: &str) -> Result<RatFunc> {
    let mut p = Cursor::new(input);
    let value = p.expr()?;
    p.finish()?;
    Ok(value)
}

/// Byte cursor shared with the hyperexponential-expression parser.
pub(crate) struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Cursor { src: src.as_bytes(), pos: 0 }
    }

    pub(crate) fn offset(&self) -> usize {
        self.pos
    }

    pub(crate) fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { offset: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub(crate) fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    pub(crate) fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.error(format!("expected '{}'", c as char))
        }
    }

    pub(crate) fn eat_keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    pub(crate) fn finish(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.error(format!("unexpected '{}'", c as char)),
        }
    }

    pub(crate) fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected an integer");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(digits.parse().unwrap())
    }

    pub(crate) fn signed_integer(&mut self) -> Result<BigInt> {
        let neg = self.eat(b'-');
        let n = self.integer()?;
        Ok(if neg { -n } else { n })
    }

    /// `integer ('/' positive-integer)?`; the slash is only taken when a
    /// nonzero integer follows, otherwise it is left for the term level.
    pub(crate) fn literal(&mut self) -> Result<Q> {
        let n = self.integer()?;
        let save = self.pos;
        if self.eat(b'/') && self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let d = self.integer()?;
            if !d.is_zero() {
                return Ok(Q::new(n, d));
            }
        }
        self.pos = save;
        Ok(Q::from_integer(n))
    }

    /// Optionally signed rational literal.
    pub(crate) fn signed_literal(&mut self) -> Result<Q> {
        let neg = self.eat(b'-');
        let v = self.literal()?;
        Ok(if neg { -v } else { v })
    }

    pub(crate) fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = if self.eat(b'-') { -self.term()? } else { self.term()? };
        loop {
            if self.eat(b'+') {
                acc = acc + self.term()?;
            } else if self.eat(b'-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc = acc * self.factor()?;
            } else if self.eat(b'/') {
                let d = self.factor()?;
                acc = acc * d.inv().ok_or(Error::DivisionByZero)?;
            } else {
                return Ok(acc);
            }
        }
    }

    pub(crate) fn factor(&mut self) -> Result<RatFunc> {
        let base = self.base()?;
        if self.eat(b'^') {
            let e = self.signed_integer()?;
            let e: i64 = match i64::try_from(e) {
                Ok(e) if e.abs() <= 10_000 => e,
                _ => return self.error("exponent too large"),
            };
            return base.pow(e).ok_or(Error::DivisionByZero);
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(RatFunc::x())
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(RatFunc::constant(self.literal()?)),
            Some(c) => self.error(format!("unexpected '{}'", c as char)),
            None => self.error("unexpected end of input"),
        }
    }
}
