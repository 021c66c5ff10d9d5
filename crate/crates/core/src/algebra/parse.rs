//! Polynomial text input.
//!
//! Grammar (whitespace ignored, juxtaposition means multiplication):
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := power (('*'|'/')? power)*
//! power  := atom ('^' ['-'] digits)?
//! atom   := digits | identifier | '(' expr ')'
//! ```
//!
//! Division and negative exponents require a unit (a nonzero constant over a
//! field, or a monomial in the Laurent variable).

use std::fmt;

use num_bigint::BigInt;

use super::poly::MultiPoly;
use super::ring::Ring;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub pos: usize,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    ring: &'a Ring,
}

pub fn parse_poly(ring: &Ring, src: &str) -> Result<MultiPoly, ParseError> {
    let mut p = Parser { src, bytes: src.as_bytes(), pos: 0, ring };
    p.skip_ws();
    if p.pos == p.bytes.len() {
        return Err(p.error_at(0, "empty polynomial"));
    }
    let value = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.error(&format!("unexpected character {:?}", p.peek_char())));
    }
    Ok(value)
}

impl<'a> Parser<'a> {
    fn error_at(&self, pos: usize, msg: &str) -> ParseError {
        let before = &self.src[..pos.min(self.src.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
        ParseError { pos, line, column, message: msg.to_string() }
    }

    fn error(&self, msg: &str) -> ParseError {
        self.error_at(self.pos, msg)
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn peek_char(&self) -> char {
        self.src[self.pos..].chars().next().unwrap_or('\0')
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\n' | b'\r')) {
            self.pos += 1;
        }
    }

    fn expr(&mut self) -> Result<MultiPoly, ParseError> {
        self.skip_ws();
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                negate = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { -&first } else { first };
        loop {
            self.skip_ws();
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

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_' || c == b'(')
    }

    fn term(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.power()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    self.skip_ws();
                    let at = self.pos;
                    let d = self.power()?;
                    let inv = d.inverse().ok_or_else(|| self.error_at(at, "divisor is not a unit in the ring"))?;
                    acc = &acc * &inv;
                }
                _ if self.starts_atom() => acc = &acc * &self.power()?,
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<MultiPoly, ParseError> {
        self.skip_ws();
        let at = self.pos;
        let base = self.atom()?;
        self.skip_ws();
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let digits = self.digits().ok_or_else(|| self.error("expected an integer exponent"))?;
        let e: u32 = digits.parse().map_err(|_| self.error("exponent too large"))?;
        let base = if negative {
            base.inverse().ok_or_else(|| self.error_at(at, "negative power of a non-unit"))?
        } else {
            base
        };
        Ok(base.pow(e))
    }

    fn digits(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.src[start..self.pos])
    }

    fn atom(&mut self) -> Result<MultiPoly, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits().unwrap();
                let n: BigInt = d.parse().expect("digit string");
                Ok(MultiPoly::from_bigint(self.ring, &n))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
                    self.pos += 1;
                }
                let name = &self.src[start..self.pos];
                MultiPoly::var(self.ring, name)
                    .map_err(|_| self.error_at(start, &format!("unknown variable {name}")))
            }
            None => Err(self.error("unexpected end of input")),
            Some(_) => Err(self.error(&format!("unexpected character {:?}", self.peek_char()))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Ring {
        Ring::laurent(&Ring::poly(&Ring::rationals(), &["a", "b"]).unwrap(), "t").unwrap()
    }

    #[test]
    fn round_trip() {
        let r = ring();
        for s in ["a^2 - 3*a*b + 1", "24/5*t^5 - t^-2", "-a", "0", "(a + b)^2 - a^2"] {
            let p = parse_poly(&r, s).unwrap();
            let q = parse_poly(&r, &p.to_string()).unwrap();
            assert_eq!(p, q, "{s}");
        }
        assert_eq!(parse_poly(&r, "(a+b)^2").unwrap().to_string(), "a^2 + 2*a*b + b^2");
        assert_eq!(parse_poly(&r, "3t^2 a").unwrap().to_string(), "3*a*t^2");
    }

    #[test]
    fn errors_carry_positions() {
        let r = ring();
        let e = parse_poly(&r, "").unwrap_err();
        assert_eq!((e.pos, e.line, e.column), (0, 1, 1));
        let e = parse_poly(&r, "a +\n  zz").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        assert!(e.message.contains("zz"));
        assert!(parse_poly(&r, "a^-1").is_err());
        assert!(parse_poly(&r, "(a").is_err());
        let z = Ring::poly(&Ring::integers(), &["x"]).unwrap();
        assert!(parse_poly(&z, "x/2").is_err());
    }
}
