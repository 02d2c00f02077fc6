//! Rational helpers and serde adapters for arbitrary-precision integers.
//!
//! JSON integers are read from native numbers when they fit in 64 bits and
//! from decimal strings otherwise; they are written back the same way.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(i: i64) -> Rational {
    Rational::from_integer(BigInt::from(i))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_big(i: &BigInt) -> Rational {
    Rational::from_integer(i.clone())
}

/// Parses `"p"`, `"-p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("not an integer: `{t}`")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Rational::new(parse_int(n)?, d))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

/// `num/den` in lowest terms, or just `num` for integers.
pub fn fmt_rational(r: &Rational) -> String {
    r.to_string()
}

/// Reduces a rational into `[0, 1)`.
pub fn frac(r: &Rational) -> Rational {
    r - r.floor()
}

pub fn is_integer(r: &Rational) -> bool {
    r.is_integer()
}

pub fn to_i64(i: &BigInt) -> Option<i64> {
    i.to_i64()
}

pub fn big_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    use num_integer::Integer;
    a.gcd(b)
}

pub fn lcm_of_denominators<'a>(it: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    use num_integer::Integer;
    it.into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

pub fn pow_rational(r: &Rational, e: u32) -> Rational {
    num_traits::pow(r.clone(), e as usize)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum IntRepr {
    I(i64),
    U(u64),
    S(String),
}

impl IntRepr {
    fn into_big(self) -> std::result::Result<BigInt, String> {
        match self {
            IntRepr::I(i) => Ok(BigInt::from(i)),
            IntRepr::U(u) => Ok(BigInt::from(u)),
            IntRepr::S(s) => s
                .trim()
                .parse::<BigInt>()
                .map_err(|_| format!("expected an integer, found `{s}`")),
        }
    }
}

fn ser_big<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_i64() {
        Some(i) => s.serialize_i64(i),
        None => s.serialize_str(&v.to_string()),
    }
}

/// `#[serde(with = "int_serde")]` for `BigInt`.
pub mod int_serde {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        ser_big(v, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        IntRepr::deserialize(d)?
            .into_big()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct IntW(#[serde(with = "int_serde")] BigInt);

/// `#[serde(with = "int_vec_serde")]` for `Vec<BigInt>`.
pub mod int_vec_serde {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&IntW(x.clone()))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<BigInt>, D::Error> {
        Ok(Vec::<IntW>::deserialize(d)?.into_iter().map(|w| w.0).collect())
    }
}

/// `#[serde(with = "int_opt_serde")]` for `Option<BigInt>`.
pub mod int_opt_serde {
    use super::*;

    pub fn serialize<S: Serializer>(
        v: &Option<BigInt>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(x) => ser_big(x, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<BigInt>, D::Error> {
        Ok(Option::<IntW>::deserialize(d)?.map(|w| w.0))
    }
}

/// `#[serde(with = "int_map_serde")]` for `BTreeMap<String, BigInt>`.
pub mod int_map_serde {
    use super::*;
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(
        v: &BTreeMap<String, BigInt>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(v.len()))?;
        for (k, x) in v {
            m.serialize_entry(k, &IntW(x.clone()))?;
        }
        m.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BTreeMap<String, BigInt>, D::Error> {
        Ok(BTreeMap::<String, IntW>::deserialize(d)?
            .into_iter()
            .map(|(k, w)| (k, w.0))
            .collect())
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RatRepr {
    I(i64),
    U(u64),
    S(String),
}

/// Rationals as JSON: integers as numbers, everything else as `"p/q"` strings.
pub mod rational_serde {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        if v.is_integer() {
            ser_big(v.numer(), s)
        } else {
            s.serialize_str(&v.to_string())
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        match RatRepr::deserialize(d)? {
            RatRepr::I(i) => Ok(int(i)),
            RatRepr::U(u) => Ok(Rational::from_integer(BigInt::from(u))),
            RatRepr::S(s) => parse_rational(&s).map_err(serde::de::Error::custom),
        }
    }
}

/// Always-string rational output for reports.
pub fn rational_str(r: &Rational) -> String {
    fmt_rational(r)
}

pub fn sign_of(r: &Rational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}
