//! Sparse multivariate polynomials over the rationals.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::linear::LinearForm;
use super::rational::{from_big, Rational};
use crate::error::{Error, Result};

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// A polynomial in `s1..sq`. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(Monomial(e), Rational::one());
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; like terms are combined.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    pub fn from_linear(form: &LinearForm) -> Self {
        let n = form.nvars();
        let mut p = Self::constant(n, from_big(form.constant()));
        for (i, a) in form.coeffs().iter().enumerate() {
            if !a.is_zero() {
                let mut e = vec![0; n];
                e[i] = 1;
                p.add_term(Monomial(e), from_big(a));
            }
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// True when the variable does not occur.
    pub fn is_free_of(&self, var: usize) -> bool {
        self.terms.keys().all(|m| m.0[var] == 0)
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars, "evaluation point dimension");
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Splits into coefficients of powers of `var`; entry `d` is free of `var`.
    pub fn coefficients_in(&self, var: usize) -> Vec<MultiPoly> {
        let deg = self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0) as usize;
        let mut out = vec![Self::zero(self.nvars); deg + 1];
        for (m, c) in &self.terms {
            let d = m.0[var] as usize;
            let mut e = m.0.clone();
            e[var] = 0;
            out[d].add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Substitutes `s_var := replacement`.
    pub fn substitute(&self, var: usize, replacement: &MultiPoly) -> MultiPoly {
        assert_eq!(replacement.nvars, self.nvars);
        let coeffs = self.coefficients_in(var);
        // Horner in the replacement.
        let mut acc = Self::zero(self.nvars);
        for c in coeffs.iter().rev() {
            acc = &(&acc * replacement) + c;
        }
        acc
    }

    /// Sets every variable equal to a single variable `s`.
    pub fn diagonal(&self) -> MultiPoly {
        let mut out = Self::zero(1);
        for (m, c) in &self.terms {
            out.add_term(Monomial(vec![m.degree()]), c.clone());
        }
        out
    }

    /// Exact division by a linear form; `None` when the remainder is nonzero.
    pub fn div_linear(&self, form: &LinearForm) -> Option<MultiPoly> {
        assert_eq!(form.nvars(), self.nvars);
        let Some(j) = form.coeffs().iter().position(|a| !a.is_zero()) else {
            let c = from_big(form.constant());
            return (!c.is_zero()).then(|| self.scale(&c.recip()));
        };
        // Divide by aj*sj + rest, treating the other variables as coefficients.
        let lead = from_big(&form.coeffs()[j]);
        let mut rest = MultiPoly::from_linear(form);
        let mut ej = vec![0; self.nvars];
        ej[j] = 1;
        rest.terms.remove(&Monomial(ej));
        let mut coeffs = self.coefficients_in(j);
        let deg = coeffs.len() - 1;
        let mut quotient = vec![Self::zero(self.nvars); deg.max(1)];
        for d in (1..=deg).rev() {
            let q = coeffs[d].scale(&lead.recip());
            coeffs[d - 1] = &coeffs[d - 1] - &(&q * &rest);
            quotient[d - 1] = q;
        }
        if !coeffs[0].is_zero() {
            return None;
        }
        let mut out = Self::zero(self.nvars);
        for (d, q) in quotient.into_iter().enumerate() {
            for (m, c) in q.terms {
                let mut e = m.0;
                e[j] += d as u32;
                out.add_term(Monomial(e), c);
            }
        }
        Some(out)
    }

    /// Largest `m` with `form^m | self`, together with the cofactor.
    ///
    /// The zero polynomial and constant forms report multiplicity 0.
    pub fn divide_out(&self, form: &LinearForm) -> (MultiPoly, u32) {
        if self.is_zero() || form.is_constant() {
            return (self.clone(), 0);
        }
        let mut q = self.clone();
        let mut m = 0;
        while let Some(next) = q.div_linear(form) {
            q = next;
            m += 1;
        }
        (q, m)
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            let vars: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        names[i].clone()
                    } else {
                        format!("{}^{}", names[i], e)
                    }
                })
                .collect();
            if vars.is_empty() {
                out.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    let a = abs.to_string();
                    if abs.is_integer() {
                        out.push_str(&a);
                    } else {
                        out.push('(');
                        out.push_str(&a);
                        out.push(')');
                    }
                    out.push('*');
                }
                out.push_str(&vars.join("*"));
            }
        }
        out
    }
}

/// Default variable names: `s` for one variable, `s1..sq` otherwise.
pub fn var_names(nvars: usize) -> Vec<String> {
    if nvars == 1 {
        vec!["s".to_string()]
    } else {
        (1..=nvars).map(|i| format!("s{i}")).collect()
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&var_names(self.nvars)))
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = MultiPoly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}

/// Checked arithmetic with a variable-count guard.
pub fn poly_arith(a: &MultiPoly, b: &MultiPoly, op: PolyOp) -> Result<MultiPoly> {
    if a.nvars != b.nvars {
        return Err(Error::VariableMismatch(a.nvars, b.nvars));
    }
    Ok(match op {
        PolyOp::Add => a + b,
        PolyOp::Sub => a - b,
        PolyOp::Mul => a * b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};

    fn s(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i)
    }

    fn c(n: usize, v: i64) -> MultiPoly {
        MultiPoly::constant(n, int(v))
    }

    #[test]
    fn difference_of_squares() {
        let p = &(&s(1, 0) + &c(1, 1)) * &(&s(1, 0) - &c(1, 1));
        assert_eq!(p, MultiPoly::from_terms(1, [(vec![2], int(1)), (vec![0], int(-1))]));
        assert_eq!(p.to_string(), "s^2-1");
    }

    #[test]
    fn adding_zero_is_identity() {
        let p = &s(2, 0) + &c(2, 3);
        assert_eq!(poly_arith(&p, &MultiPoly::zero(2), PolyOp::Add).unwrap(), p);
    }

    #[test]
    fn hand_expanded_product() {
        let l = &(&s(2, 0).scale(&int(2)) + &s(2, 1).scale(&int(3))) + &c(2, 5);
        let r = &s(2, 0) + &c(2, 1);
        let p = poly_arith(&l, &r, PolyOp::Mul).unwrap();
        let expected = MultiPoly::from_terms(
            2,
            [
                (vec![2, 0], int(2)),
                (vec![1, 1], int(3)),
                (vec![1, 0], int(7)),
                (vec![0, 1], int(3)),
                (vec![0, 0], int(5)),
            ],
        );
        assert_eq!(p, expected);
        assert_eq!(p.to_string(), "2*s1^2+3*s1*s2+7*s1+3*s2+5");
    }

    #[test]
    fn variable_mismatch_is_an_error() {
        assert_eq!(
            poly_arith(&s(1, 0), &s(2, 0), PolyOp::Add),
            Err(Error::VariableMismatch(1, 2))
        );
    }

    #[test]
    fn divide_out_multiplicities() {
        let f = LinearForm::new(vec![1.into()], 1.into());
        let n = MultiPoly::from_linear(&f).pow(2);
        let (q, m) = n.divide_out(&f);
        assert_eq!(m, 2);
        assert_eq!(q, MultiPoly::one(1));

        let n = MultiPoly::from_terms(1, [(vec![1], int(4)), (vec![0], int(5))]);
        let l = LinearForm::new(vec![6.into()], 5.into());
        assert_eq!(n.divide_out(&l).1, 0);
        // the remainder at s = -5/6 is 5/3
        assert_eq!(n.eval(&[rat(-5, 6)]), rat(5, 3));

        let l = LinearForm::new(vec![2.into(), 3.into()], 5.into());
        let n = &MultiPoly::from_linear(&l) * &(&s(2, 0) + &c(2, 1));
        let (q, m) = n.divide_out(&l);
        assert_eq!(m, 1);
        assert_eq!(q, &s(2, 0) + &c(2, 1));
    }

    #[test]
    fn substitution_and_diagonal() {
        // (s1 + 2 s2)(s1 - 1) with s1 := -s2
        let p = &(&s(2, 0) + &s(2, 1).scale(&int(2))) * &(&s(2, 0) - &c(2, 1));
        let q = p.substitute(0, &-&s(2, 1));
        assert!(q.is_free_of(0));
        assert_eq!(q, &s(2, 1) * &(&-&s(2, 1) - &c(2, 1)));
        let d = p.diagonal();
        assert_eq!(d, &s(1, 0).scale(&int(3)) * &(&s(1, 0) - &c(1, 1)));
    }

    #[test]
    fn rational_coefficient_printing() {
        let p = MultiPoly::from_terms(1, [(vec![1], rat(-1, 2)), (vec![0], rat(3, 4))]);
        assert_eq!(p.to_string(), "-(1/2)*s+3/4");
    }
}
