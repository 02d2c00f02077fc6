//! Leading terms in `k` of Euler characteristics cut out by a generic
//! member `H` of `|L^k|`, and the top-degree dominance test built on them.
//!
//! Only leading behaviour is known; lower-order terms are never fabricated.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::rational::int_serde;
use crate::error::{Error, Result};

/// `sign * coefficient * k^exponent + (unknown lower order terms)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeadingTerm {
    pub sign: i8,
    #[serde(with = "int_serde")]
    pub coefficient: BigInt,
    pub exponent: u32,
    /// No lower-order terms exist (zero-dimensional complements).
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub exact: bool,
}

impl LeadingTerm {
    pub fn new(sign: i8, coefficient: BigInt, exponent: u32) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return Err(Error::Precondition(format!("sign must be +1 or -1, got {sign}")));
        }
        if !coefficient.is_positive() {
            return Err(Error::Precondition(format!(
                "leading coefficient must be positive, got {coefficient}"
            )));
        }
        Ok(LeadingTerm {
            sign,
            coefficient,
            exponent,
            exact: false,
        })
    }

    pub fn signed_coefficient(&self) -> BigInt {
        if self.sign < 0 {
            -self.coefficient.clone()
        } else {
            self.coefficient.clone()
        }
    }
}

impl fmt::Display for LeadingTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign < 0 { '-' } else { '+' };
        match self.exponent {
            0 => write!(f, "{s}{}", self.coefficient)?,
            1 => write!(f, "{s}{}k", self.coefficient)?,
            e => write!(f, "{s}{}k^{e}", self.coefficient)?,
        }
        if !self.exact {
            f.write_str(" + O(lower)")?;
        }
        Ok(())
    }
}

fn parity_sign(e: u32) -> i8 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Leading term of `χ(V \ H)` for `V` of dimension `dim_v` whose top
/// components have degree `deg_top`. Exact when `dim_v = 0`.
pub fn leading_chi_complement(dim_v: u32, deg_top: &BigInt) -> Result<LeadingTerm> {
    let mut t = LeadingTerm::new(parity_sign(dim_v), deg_top.clone(), dim_v)?;
    t.exact = dim_v == 0;
    Ok(t)
}

/// Leading term of `χ(V ∩ H)`; needs `dim_v > 0`.
pub fn leading_chi_section(dim_v: u32, deg_top: &BigInt) -> Result<LeadingTerm> {
    if dim_v == 0 {
        return Err(Error::Precondition(
            "a generic section misses zero-dimensional sets".into(),
        ));
    }
    LeadingTerm::new(parity_sign(dim_v - 1), deg_top.clone(), dim_v)
}

/// Leading term of `χ(H \ V)` in an ambient space of dimension `n`.
pub fn leading_chi_ambient(n: u32, deg_y: &BigInt) -> Result<LeadingTerm> {
    if n == 0 {
        return Err(Error::Precondition("ambient dimension must be positive".into()));
    }
    LeadingTerm::new(parity_sign(n - 1), deg_y.clone(), n)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dominance {
    /// True for an empty list or when the top-degree coefficients cancel.
    pub vanishes_identically: bool,
    pub top: Option<LeadingTerm>,
    /// Signed coefficient sum at the top exponent.
    #[serde(with = "int_serde")]
    pub top_sum: BigInt,
}

/// Sums signed coefficients at the largest exponent present.
pub fn dominance_check(terms: &[LeadingTerm]) -> Dominance {
    let mut by_exp: BTreeMap<u32, BigInt> = BTreeMap::new();
    for t in terms {
        *by_exp.entry(t.exponent).or_default() += t.signed_coefficient();
    }
    let Some((&r, sum)) = by_exp.iter().next_back() else {
        return Dominance {
            vanishes_identically: true,
            top: None,
            top_sum: BigInt::zero(),
        };
    };
    let top = (!sum.is_zero()).then(|| LeadingTerm {
        sign: if sum.is_negative() { -1 } else { 1 },
        coefficient: sum.abs(),
        exponent: r,
        exact: terms.iter().all(|t| t.exact),
    });
    Dominance {
        vanishes_identically: sum.is_zero(),
        top,
        top_sum: sum.clone(),
    }
}

/// Parses `+5k^2`, `-3k`, `4`.
pub fn parse_leading(s: &str) -> Result<LeadingTerm> {
    let t = s.trim();
    let (sign, rest) = match t.strip_prefix('-') {
        Some(r) => (-1, r),
        None => (1, t.strip_prefix('+').unwrap_or(t)),
    };
    let (coef, exp) = match rest.split_once('k') {
        None => (rest, 0),
        Some((c, e)) => {
            let e = match e.strip_prefix('^') {
                Some(e) => e
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad exponent in `{s}`")))?,
                None if e.is_empty() => 1,
                None => return Err(Error::Parse(format!("bad term `{s}`"))),
            };
            (if c.is_empty() { "1" } else { c.trim_end_matches('*') }, e)
        }
    };
    let coef = coef
        .parse::<BigInt>()
        .map_err(|_| Error::Parse(format!("bad coefficient in `{s}`")))?;
    LeadingTerm::new(sign, coef, exp)
}
