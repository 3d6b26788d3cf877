//! Divisor expressions: `2C1 + 2C2`, `1/3 C3 - C1`, `3*E0 - 1/2*E1`.
//!
//! A term is an optional sign, an optional integer or `p/q` coefficient,
//! an optional `*`, then a prime name. Whitespace is ignored between tokens.
//! Names start with a letter or `_` and continue with letters, digits, `_`,
//! `'` or `.`. The lone expression `0` is the zero divisor.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{Divisor, IntersectionLattice};
use crate::rational::{self, Rational};

pub fn parse_divisor(text: &str, lattice: &Arc<IntersectionLattice>) -> Result<Divisor> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let mut coeffs = vec![Rational::zero(); lattice.len()];
    p.skip_ws();
    if p.at_end() {
        return Err(p.err("empty divisor expression"));
    }
    if text.trim() == "0" {
        return Divisor::new(lattice, coeffs);
    }
    let mut first = true;
    loop {
        p.skip_ws();
        if p.at_end() {
            break;
        }
        let mut sign = Rational::one();
        match p.peek() {
            Some(b'+') | Some(b'-') => {
                if p.peek() == Some(b'-') {
                    sign = -sign;
                }
                p.pos += 1;
                p.skip_ws();
            }
            _ if !first => return Err(p.err("expected `+` or `-` between terms")),
            _ => {}
        }
        let coef = p.coefficient()?;
        p.skip_ws();
        if coef.is_some() && p.peek() == Some(b'*') {
            p.pos += 1;
            p.skip_ws();
        }
        let start = p.pos;
        let name = p.name()?;
        let idx = lattice.index_of(name).ok_or_else(|| Error::Parse {
            pos: start,
            msg: format!("unknown prime {name}"),
        })?;
        coeffs[idx] += sign * coef.unwrap_or_else(Rational::one);
        first = false;
    }
    Divisor::new(lattice, coeffs)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap()
    }

    fn coefficient(&mut self) -> Result<Option<Rational>> {
        let start = self.pos;
        let num = self.digits();
        if num.is_empty() {
            return Ok(None);
        }
        let save = self.pos;
        self.skip_ws();
        let den = if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            let d = self.digits();
            if d.is_empty() {
                return Err(self.err("malformed rational: missing denominator"));
            }
            d
        } else {
            self.pos = save;
            "1"
        };
        let r = rational::parse(&format!("{num}/{den}")).map_err(|m| Error::Parse {
            pos: start,
            msg: format!("malformed rational: {m}"),
        })?;
        Ok(Some(r))
    }

    fn name(&mut self) -> Result<&'a str> {
        let start = self.pos;
        match self.peek() {
            Some(b) if b.is_ascii_alphabetic() || b == b'_' => self.pos += 1,
            Some(_) => return Err(self.err("expected a prime name")),
            None => return Err(self.err("unexpected end of input, expected a prime name")),
        }
        while self
            .peek()
            .is_some_and(|b| b.is_ascii_alphanumeric() || matches!(b, b'_' | b'\'' | b'.'))
        {
            self.pos += 1;
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }
}

/// Canonical form: terms in prime order, `1` coefficients omitted, e.g.
/// `C'1 + 1/3 C'3` or `-C1 + 2 C2`; the zero divisor prints as `0`.
impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if !a.is_one() {
                write!(f, "{a} ")?;
            }
            f.write_str(&self.lattice().primes()[i])?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}
