//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor ('*' factor)*
//! factor  := '-' factor | atom ('^' uint)?
//! atom    := rational | identifier | '(' expr ')'
//! rational:= int | int '/' posint
//! ```
//!
//! Unary minus binds looser than `^`, so `-x^2` is `-(x^2)`. There is no
//! implicit multiplication and no division outside rational literals.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};

use num_bigint::BigInt;
use num_traits::Zero;

use super::{SparsePoly, Variables};
use crate::error::{Error, Result};
use crate::number::Rational;

pub fn parse_expression(text: &str, vars: &Variables, params: &BTreeMap<String, Rational>) -> Result<SparsePoly> {
    let mut parser = Parser { src: text.as_bytes(), pos: 0, vars, params };
    if let Some(i) = text.bytes().position(|b| !b.is_ascii()) {
        return Err(Error::Syntax { position: i, message: "non-ASCII character".to_string() });
    }
    let e = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(parser.error(format!("unexpected `{}`", parser.src[parser.pos] as char)));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a Variables,
    params: &'a BTreeMap<String, Rational>,
}

impl Parser<'_> {
    fn error(&self, message: String) -> Error {
        Error::Syntax { position: self.pos, message }
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

    fn expr(&mut self) -> Result<SparsePoly> {
        let mut acc = self.term()?;
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

    fn term(&mut self) -> Result<SparsePoly> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<SparsePoly> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-self.factor()?);
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(Error::Syntax { position: start, message: "expected exponent".to_string() });
            }
            let e: u32 = digits
                .parse()
                .map_err(|_| Error::Syntax { position: start, message: "exponent too large".to_string() })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        core::str::from_utf8(&self.src[start..self.pos]).expect("ascii")
    }

    fn atom(&mut self) -> Result<SparsePoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`".to_string()));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = self.digits().parse().expect("digits");
                let mut den = BigInt::from(1);
                if self.src.get(self.pos) == Some(&b'/') {
                    self.pos += 1;
                    let start = self.pos;
                    let d = self.digits();
                    if d.is_empty() {
                        return Err(Error::Syntax { position: start, message: "expected denominator".to_string() });
                    }
                    den = d.parse().expect("digits");
                    if den.is_zero() {
                        return Err(Error::ZeroDenominator(start));
                    }
                }
                Ok(SparsePoly::constant(self.vars, Rational::new(num, den)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                if let Some(i) = self.vars.index_of(name) {
                    Ok(SparsePoly::var(self.vars, i))
                } else if let Some(v) = self.params.get(name) {
                    Ok(SparsePoly::constant(self.vars, v.clone()))
                } else {
                    Err(Error::UnknownIdentifier { name: name.to_string(), position: start })
                }
            }
            Some(c) => Err(self.error(format!("unexpected `{}`", c as char))),
            None => Err(self.error("unexpected end of input".to_string())),
        }
    }
}
