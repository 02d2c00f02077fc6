//! Integer affine linear forms `a1*s1 + ... + aq*sq + n`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::var_names;
use super::rational::{from_big, lcm_of_denominators, Rational};
use crate::error::{Error, Result};

/// Raw forms keep their content; `primitive()` gives the class representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearForm {
    coeffs: Vec<BigInt>,
    constant: BigInt,
}

impl LinearForm {
    pub fn new(coeffs: Vec<BigInt>, constant: BigInt) -> Self {
        LinearForm { coeffs, constant }
    }

    pub fn from_i64(coeffs: &[i64], constant: i64) -> Self {
        LinearForm::new(coeffs.iter().map(|&a| a.into()).collect(), constant.into())
    }

    /// Candidate form of a divisor: non-negative coefficients, not all zero,
    /// positive constant.
    pub fn candidate(coeffs: Vec<BigInt>, constant: BigInt) -> Result<Self> {
        let form = LinearForm::new(coeffs, constant);
        if form.coeffs.iter().any(|a| a.is_negative()) {
            return Err(Error::Invalid(format!("negative multiplicity in `{form}`")));
        }
        if !form.constant.is_positive() {
            return Err(Error::Invalid(format!("non-positive discrepancy in `{form}`")));
        }
        if form.is_constant() {
            return Err(Error::ConstantForm(form.to_string()));
        }
        Ok(form)
    }

    /// Clears denominators of a rational form; returns `(L, form)` with
    /// `rational_form = form / L`.
    pub fn from_rational(coeffs: &[Rational], constant: &Rational) -> (BigInt, LinearForm) {
        let l = lcm_of_denominators(coeffs.iter().chain(std::iter::once(constant)));
        let scale = Rational::from_integer(l.clone());
        let to_int = |r: &Rational| (r * &scale).to_integer();
        (
            l,
            LinearForm::new(coeffs.iter().map(to_int).collect(), to_int(constant)),
        )
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn constant(&self) -> &BigInt {
        &self.constant
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// gcd of all coefficients and the constant.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(self.constant.abs(), |g, a| g.gcd(a))
    }

    /// gcd of the variable coefficients only.
    pub fn coefficient_gcd(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, a| g.gcd(a))
    }

    /// `(c, p)` with `self = c * p`, `p` of content one and its first nonzero
    /// entry (coefficients first, then the constant) positive.
    pub fn primitive(&self) -> (Rational, LinearForm) {
        let mut g = self.content();
        if g.is_zero() {
            return (Rational::one(), self.clone());
        }
        let lead = self
            .coeffs
            .iter()
            .chain(std::iter::once(&self.constant))
            .find(|a| !a.is_zero())
            .unwrap();
        if lead.is_negative() {
            g = -g;
        }
        let p = LinearForm::new(
            self.coeffs.iter().map(|a| a / &g).collect(),
            &self.constant / &g,
        );
        (Rational::from_integer(g), p)
    }

    pub fn is_proportional(&self, other: &LinearForm) -> bool {
        self.primitive().1 == other.primitive().1
    }

    pub fn scaled(&self, c: &BigInt) -> LinearForm {
        LinearForm::new(self.coeffs.iter().map(|a| a * c).collect(), &self.constant * c)
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars());
        self.coeffs
            .iter()
            .zip(point)
            .fold(from_big(&self.constant), |acc, (a, x)| acc + from_big(a) * x)
    }

    /// Sum of the coefficients times `s`, plus the constant.
    pub fn diagonal(&self) -> LinearForm {
        LinearForm::new(
            vec![self.coeffs.iter().fold(BigInt::zero(), |acc, a| acc + a)],
            self.constant.clone(),
        )
    }

    /// Substitutes `s_var := expr` where `expr` is the affine function
    /// `expr_coeffs . s + expr_const` (with `expr_coeffs[var] == 0`).
    /// Returns the rational coefficients of the result.
    pub fn substitute(
        &self,
        var: usize,
        expr_coeffs: &[Rational],
        expr_const: &Rational,
    ) -> (Vec<Rational>, Rational) {
        let a = from_big(&self.coeffs[var]);
        let mut coeffs: Vec<Rational> = self.coeffs.iter().map(from_big).collect();
        coeffs[var] = Rational::zero();
        for (c, e) in coeffs.iter_mut().zip(expr_coeffs) {
            *c += &a * e;
        }
        (coeffs, from_big(&self.constant) + &a * expr_const)
    }

    /// Solves `self = 0` for the first variable with a nonzero coefficient.
    pub fn solve_first(&self) -> Option<(usize, Vec<Rational>, Rational)> {
        let j = self.coeffs.iter().position(|a| !a.is_zero())?;
        let aj = from_big(&self.coeffs[j]);
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| {
                if i == j {
                    Rational::zero()
                } else {
                    -from_big(a) / &aj
                }
            })
            .collect();
        Some((j, coeffs, -from_big(&self.constant) / aj))
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        let mut out = String::new();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if a.is_negative() {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            let abs = a.abs();
            if !abs.is_one() {
                out.push_str(&abs.to_string());
                out.push('*');
            }
            out.push_str(&names[i]);
        }
        if !self.constant.is_zero() || out.is_empty() {
            if self.constant.is_negative() {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            out.push_str(&self.constant.abs().to_string());
        }
        out
    }

    fn sort_key(&self) -> usize {
        self.coeffs
            .iter()
            .position(|a| !a.is_zero())
            .unwrap_or(self.coeffs.len())
    }
}

impl Ord for LinearForm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key()
            .cmp(&other.sort_key())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
            .then_with(|| self.constant.cmp(&other.constant))
    }
}

impl PartialOrd for LinearForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&var_names(self.nvars())))
    }
}
