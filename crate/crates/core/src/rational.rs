//! Exact rational scalars and their `"num/den"` wire form.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision fraction, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational string")]
    Empty,
    #[error("malformed rational {0:?}: expected \"num/den\" with integer parts")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Parses `"p/q"` (optional sign on either part) or a bare integer `"p"`.
/// Decimal and exponent notation are rejected.
pub fn parse(s: &str) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let parse_int = |t: &str| -> Result<BigInt, ParseRationalError> {
        let digits = t.strip_prefix(['+', '-']).unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseRationalError::Malformed(s.to_string()));
        }
        BigInt::from_str(t.strip_prefix('+').unwrap_or(t))
            .map_err(|_| ParseRationalError::Malformed(s.to_string()))
    };
    let n = parse_int(num)?;
    let d = parse_int(den)?;
    if d.is_zero() {
        return Err(ParseRationalError::ZeroDenominator(s.to_string()));
    }
    Ok(Rational::new(n, d))
}

/// Formats as `"p/q"` in lowest terms; integers keep the `/1`.
pub fn format(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn half() -> Rational {
    frac(1, 2)
}

pub fn is_negative(r: &Rational) -> bool {
    r.is_negative()
}

/// Serde adapter for a single rational stored as a string.
pub mod serde_str {
    use super::Rational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse(&s).map_err(D::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod serde_vec {
    use super::Rational;
    use serde::{de::Error, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&super::format(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| super::parse(s).map_err(D::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_reduces() {
        assert_eq!(parse("2/4").unwrap(), frac(1, 2));
        assert_eq!(parse("-3/6").unwrap(), frac(-1, 2));
        assert_eq!(parse("3/-6").unwrap(), frac(-1, 2));
        assert_eq!(parse("+7").unwrap(), int(7));
        assert_eq!(format(&parse("0/5").unwrap()), "0/1");
        assert_eq!(format(&int(1)), "1/1");
    }

    #[test]
    fn rejects_floats_and_garbage() {
        assert!(matches!(parse("0.5"), Err(ParseRationalError::Malformed(_))));
        assert!(matches!(parse("1e3"), Err(ParseRationalError::Malformed(_))));
        assert!(matches!(parse("1/0"), Err(ParseRationalError::ZeroDenominator(_))));
        assert!(matches!(parse(""), Err(ParseRationalError::Empty)));
        assert!(parse("1//2").is_err());
        assert!(parse("--1").is_err());
    }
}
