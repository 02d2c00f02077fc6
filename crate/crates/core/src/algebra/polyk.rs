//! Univariate polynomials in the section parameter `k`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{from_big, Rational};

/// Coefficients in increasing degree; trailing zeros are trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PolyInK(Vec<Rational>);

impl PolyInK {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        PolyInK(coeffs)
    }

    pub fn zero() -> Self {
        PolyInK(Vec::new())
    }

    pub fn constant(c: Rational) -> Self {
        PolyInK::new(vec![c])
    }

    /// `a + b*k`.
    pub fn affine(a: &BigInt, b: &BigInt) -> Self {
        PolyInK::new(vec![from_big(a), from_big(b)])
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        PolyInK::new(coeffs.iter().map(|&c| super::rational::int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.0.last()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.0.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.0[0].clone()),
            _ => None,
        }
    }

    pub fn eval(&self, k: &Rational) -> Rational {
        self.0
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * k + c)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PolyInK::new(self.0.iter().map(|x| x * c).collect())
    }
}

impl Add for &PolyInK {
    type Output = PolyInK;
    fn add(self, rhs: &PolyInK) -> PolyInK {
        let n = self.0.len().max(rhs.0.len());
        PolyInK::new(
            (0..n)
                .map(|i| {
                    self.0.get(i).cloned().unwrap_or_default()
                        + rhs.0.get(i).cloned().unwrap_or_default()
                })
                .collect(),
        )
    }
}

impl Neg for &PolyInK {
    type Output = PolyInK;
    fn neg(self) -> PolyInK {
        PolyInK::new(self.0.iter().map(|c| -c).collect())
    }
}

impl Sub for &PolyInK {
    type Output = PolyInK;
    fn sub(self, rhs: &PolyInK) -> PolyInK {
        self + &-rhs
    }
}

impl Mul for &PolyInK {
    type Output = PolyInK;
    fn mul(self, rhs: &PolyInK) -> PolyInK {
        if self.is_zero() || rhs.is_zero() {
            return PolyInK::zero();
        }
        let mut out = vec![Rational::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyInK::new(out)
    }
}

impl fmt::Display for PolyInK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (d, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            if c.is_negative() {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            first = false;
            let coeff = if abs.is_integer() {
                abs.to_string()
            } else {
                format!("({abs})")
            };
            match d {
                0 => write!(f, "{abs}")?,
                1 if abs.is_one() => f.write_str("k")?,
                1 => write!(f, "{coeff}*k")?,
                _ if abs.is_one() => write!(f, "k^{d}")?,
                _ => write!(f, "{coeff}*k^{d}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for PolyInK {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for c in &self.0 {
            seq.serialize_element(&RatOut(c))?;
        }
        seq.end()
    }
}

struct RatOut<'a>(&'a Rational);

impl Serialize for RatOut<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        super::rational::rational_serde::serialize(self.0, s)
    }
}

impl<'de> Deserialize<'de> for PolyInK {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(transparent)]
        struct R(#[serde(with = "super::rational::rational_serde")] Rational);
        let v = Vec::<R>::deserialize(d)?;
        Ok(PolyInK::new(v.into_iter().map(|r| r.0).collect()))
    }
}
