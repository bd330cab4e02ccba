//! Exact rationals for breakpoints, and real parameters that may be given
//! either exactly ("2/3") or as binary doubles.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, ToPrimitive, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational with 64-bit numerator and denominator, always normalized.
pub type Q = Ratio<i64>;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(num, den)
}

pub fn q_add(a: Q, b: Q) -> Result<Q> {
    a.checked_add(&b).ok_or(Error::Overflow)
}

pub fn q_sub(a: Q, b: Q) -> Result<Q> {
    a.checked_sub(&b).ok_or(Error::Overflow)
}

pub fn q_mul(a: Q, b: Q) -> Result<Q> {
    a.checked_mul(&b).ok_or(Error::Overflow)
}

pub fn q_to_f64(x: Q) -> f64 {
    x.to_f64().unwrap_or_else(|| *x.numer() as f64 / *x.denom() as f64)
}

/// Parses `"num/den"` or a bare integer.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Q::new(n, d))
        }
        None => s.parse::<i64>().map(Q::from_integer).map_err(|_| bad()),
    }
}

pub fn format_q(x: Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Serde adapter for a single rational stored as a `"num/den"` string.
pub mod q_string {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(*x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(de::Error::custom)
    }
}

/// Serde adapter for a vector of rationals stored as strings.
pub mod q_vec_string {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<String> = xs.iter().map(|x| format_q(*x)).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        strs.iter()
            .map(|s| parse_q(s).map_err(de::Error::custom))
            .collect()
    }
}

/// A real parameter, kept exact when it was supplied as a rational.
#[derive(Clone, Copy, Debug)]
pub enum Param {
    Exact(Q),
    Real(f64),
}

impl Param {
    pub fn exact(num: i64, den: i64) -> Self {
        Param::Exact(Q::new(num, den))
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Param::Exact(x) => q_to_f64(x),
            Param::Real(x) => x,
        }
    }

    /// Compares against an exact rational, exactly when possible.
    pub fn cmp_q(self, other: Q) -> Ordering {
        match self {
            Param::Exact(x) => x.cmp(&other),
            Param::Real(x) => x.total_cmp(&q_to_f64(other)),
        }
    }

    pub fn is_zero(self) -> bool {
        match self {
            Param::Exact(x) => x.is_zero(),
            Param::Real(x) => x == 0.0,
        }
    }
}

impl PartialEq for Param {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Param::Exact(a), Param::Exact(b)) => a == b,
            _ => self.to_f64() == other.to_f64(),
        }
    }
}

impl From<f64> for Param {
    fn from(x: f64) -> Self {
        Param::Real(x)
    }
}

impl From<Q> for Param {
    fn from(x: Q) -> Self {
        Param::Exact(x)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Exact(x) => f.write_str(&format_q(*x)),
            Param::Real(x) => write!(f, "{x}"),
        }
    }
}

impl FromStr for Param {
    type Err = Error;

    /// `"2/3"` and `"3"` are exact; anything else is parsed as a double.
    fn from_str(s: &str) -> Result<Self> {
        if let Ok(x) = parse_q(s) {
            return Ok(Param::Exact(x));
        }
        s.trim()
            .parse::<f64>()
            .map(Param::Real)
            .map_err(|_| Error::Parse(format!("not a number: {s:?}")))
    }
}

impl Serialize for Param {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Param::Exact(x) => s.serialize_str(&format_q(*x)),
            Param::Real(x) => s.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for Param {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct ParamVisitor;

        impl Visitor<'_> for ParamVisitor {
            type Value = Param;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or a rational string such as \"2/3\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Param, E> {
                Ok(Param::Real(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Param, E> {
                Ok(Param::Exact(Q::from_integer(v)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Param, E> {
                i64::try_from(v)
                    .map(|v| Param::Exact(Q::from_integer(v)))
                    .map_err(|_| E::custom("integer too large"))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Param, E> {
                v.parse().map_err(E::custom)
            }
        }

        d.deserialize_any(ParamVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals_and_integers() {
        assert_eq!(parse_q("2/3").unwrap(), q(2, 3));
        assert_eq!(parse_q(" 4/6 ").unwrap(), q(2, 3));
        assert_eq!(parse_q("1").unwrap(), q(1, 1));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("0.5").is_err());
        assert_eq!(format_q(q(3, 1)), "3");
        assert_eq!(format_q(q(-1, 3)), "-1/3");
    }

    #[test]
    fn param_parsing_keeps_rationals_exact() {
        let p: Param = "2/3".parse().unwrap();
        assert!(matches!(p, Param::Exact(x) if x == q(2, 3)));
        let p: Param = "0.75".parse().unwrap();
        assert!(matches!(p, Param::Real(x) if x == 0.75));
        let p: Param = serde_json::from_str("0.5").unwrap();
        assert!(matches!(p, Param::Real(_)));
        let p: Param = serde_json::from_str("\"1/2\"").unwrap();
        assert_eq!(p.cmp_q(q(1, 2)), Ordering::Equal);
    }

    #[test]
    fn overflow_is_reported() {
        let big = q(1, i64::MAX - 1);
        let other = q(1, i64::MAX - 2);
        assert_eq!(q_add(big, other), Err(Error::Overflow));
    }
}
