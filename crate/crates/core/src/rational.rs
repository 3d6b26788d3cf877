//! Arbitrary-precision rationals and their text encoding.
//!
//! Every rational is printed in normalized form: `p/q` with `q > 0` and
//! `gcd(p, q) = 1`, or plain `p` when the denominator is one.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

pub fn format(r: &Rational) -> String {
    r.to_string()
}

/// Parses `p`, `-p`, `p/q` (surrounding whitespace allowed). Rejects a zero
/// denominator and anything that is not plain decimal digits.
pub fn parse(text: &str) -> Result<Rational, String> {
    let t = text.trim();
    if t.is_empty() {
        return Err("empty rational".into());
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let n = parse_int(num).ok_or_else(|| format!("malformed rational `{t}`"))?;
    let d = match den {
        Some(d) => {
            if d.starts_with(['-', '+']) {
                return Err(format!("malformed rational `{t}`"));
            }
            parse_int(d).ok_or_else(|| format!("malformed rational `{t}`"))?
        }
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(format!("zero denominator in `{t}`"));
    }
    Ok(Rational::new(n, d))
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

pub fn min<'a>(a: &'a Rational, b: &'a Rational) -> &'a Rational {
    if a <= b {
        a
    } else {
        b
    }
}

pub fn sign(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Serde adaptor: a rational written as a normalized string, read from a
/// string or a JSON integer.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Q(pub Rational);

impl fmt::Debug for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<Rational> for Q {
    fn from(r: Rational) -> Self {
        Q(r)
    }
}

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(&self.0))
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(Q(int(n))),
            Raw::Str(s) => parse(&s).map(Q).map_err(serde::de::Error::custom),
        }
    }
}

/// For `#[serde(serialize_with = ...)]` on bare `Rational` fields.
pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format(r))
}
