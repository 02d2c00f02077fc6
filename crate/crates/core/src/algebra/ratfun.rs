//! Rational functions with products of linear forms as denominators.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::linear::LinearForm;
use super::poly::{var_names, MultiPoly};
use super::polyk::PolyInK;
use super::rational::{from_big, pow_rational, Rational};
use crate::error::{Error, Result};
use crate::exec::Exec;

/// `numerator / prod(form^e)` with primitive, pairwise non-proportional
/// forms, none of which divides the numerator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunctionNF {
    numerator: MultiPoly,
    denominator: BTreeMap<LinearForm, u32>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Coefficient {
    Rational(Rational),
    SymbolicK(PolyInK),
}

impl From<Rational> for Coefficient {
    fn from(r: Rational) -> Self {
        Coefficient::Rational(r)
    }
}

/// `coefficient * prod(1/form)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SimpleTerm {
    pub coefficient: Coefficient,
    pub forms: Vec<LinearForm>,
}

impl SimpleTerm {
    pub fn new(coefficient: impl Into<Coefficient>, forms: Vec<LinearForm>) -> Self {
        SimpleTerm {
            coefficient: coefficient.into(),
            forms,
        }
    }
}

impl RationalFunctionNF {
    pub fn zero(nvars: usize) -> Self {
        RationalFunctionNF {
            numerator: MultiPoly::zero(nvars),
            denominator: BTreeMap::new(),
        }
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        RationalFunctionNF {
            numerator: p,
            denominator: BTreeMap::new(),
        }
    }

    /// Normalizes `numerator / prod(form^e)` for arbitrary integer forms.
    pub fn from_parts(
        numerator: MultiPoly,
        factors: impl IntoIterator<Item = (LinearForm, u32)>,
    ) -> Result<Self> {
        let nvars = numerator.nvars();
        let mut scale = Rational::one();
        let mut denom: BTreeMap<LinearForm, u32> = BTreeMap::new();
        for (form, e) in factors {
            if form.nvars() != nvars {
                return Err(Error::VariableMismatch(nvars, form.nvars()));
            }
            if e == 0 {
                continue;
            }
            if form.is_constant() {
                let c = from_big(form.constant());
                if c.is_zero() {
                    return Err(Error::DegenerateForm(form.to_string()));
                }
                scale /= pow_rational(&c, e);
                continue;
            }
            let (c, p) = form.primitive();
            scale /= pow_rational(&c, e);
            *denom.entry(p).or_insert(0) += e;
        }
        Ok(Self::reduce(numerator.scale(&scale), denom))
    }

    /// Cancels every denominator form against the numerator.
    fn reduce(mut numerator: MultiPoly, mut denom: BTreeMap<LinearForm, u32>) -> Self {
        if numerator.is_zero() {
            return Self::zero(numerator.nvars());
        }
        for (form, e) in denom.iter_mut() {
            while *e > 0 {
                match numerator.div_linear(form) {
                    Some(q) => {
                        numerator = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        denom.retain(|_, e| *e > 0);
        RationalFunctionNF {
            numerator,
            denominator: denom,
        }
    }

    pub fn nvars(&self) -> usize {
        self.numerator.nvars()
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.numerator
    }

    pub fn denominator(&self) -> &BTreeMap<LinearForm, u32> {
        &self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Exponent of the proportionality class of `form` in the denominator.
    pub fn class_exponent(&self, form: &LinearForm) -> u32 {
        if form.is_constant() {
            return 0;
        }
        self.denominator
            .get(&form.primitive().1)
            .copied()
            .unwrap_or(0)
    }

    /// Product of all denominator forms, as a polynomial.
    pub fn denominator_poly(&self) -> MultiPoly {
        self.denominator
            .iter()
            .fold(MultiPoly::one(self.nvars()), |acc, (f, e)| {
                &acc * &MultiPoly::from_linear(f).pow(*e)
            })
    }

    pub fn total_degree(&self) -> u32 {
        self.numerator
            .total_degree()
            .max(self.denominator.values().sum())
    }

    /// `None` when a denominator form vanishes at the point.
    pub fn eval(&self, point: &[Rational]) -> Option<Rational> {
        let mut d = Rational::one();
        for (f, e) in &self.denominator {
            let v = f.eval(point);
            if v.is_zero() {
                return None;
            }
            d *= pow_rational(&v, *e);
        }
        Some(self.numerator.eval(point) / d)
    }

    /// `form * self`, renormalized.
    pub fn mul_form(&self, form: &LinearForm) -> Result<Self> {
        let num = &self.numerator * &MultiPoly::from_linear(form);
        Self::from_parts(num, self.denominator.clone())
    }

    /// Restriction to the hyperplane `form = 0`, eliminating the first
    /// variable with a nonzero coefficient. The variable count is kept; the
    /// eliminated variable simply no longer occurs.
    pub fn restrict(&self, form: &LinearForm) -> Result<(usize, Self)> {
        let (j, expr_coeffs, expr_const) = form
            .solve_first()
            .ok_or_else(|| Error::ConstantForm(form.to_string()))?;
        let n = self.nvars();
        let mut replacement = MultiPoly::constant(n, expr_const.clone());
        for (i, c) in expr_coeffs.iter().enumerate() {
            if !c.is_zero() {
                replacement = &replacement + &MultiPoly::var(n, i).scale(c);
            }
        }
        let mut numerator = self.numerator.substitute(j, &replacement);
        let mut factors = Vec::new();
        for (f, e) in &self.denominator {
            let (coeffs, constant) = f.substitute(j, &expr_coeffs, &expr_const);
            let (l, g) = LinearForm::from_rational(&coeffs, &constant);
            if g.is_constant() && g.constant().is_zero() {
                return Err(Error::DegenerateForm(format!(
                    "`{f}` vanishes on `{form}`"
                )));
            }
            // 1 / (g/l)^e = l^e / g^e
            numerator = numerator.scale(&pow_rational(&Rational::from_integer(l), *e));
            factors.push((g, *e));
        }
        Ok((j, Self::from_parts(numerator, factors)?))
    }

    /// Substitutes `s1 = ... = sq = s`.
    pub fn diagonal(&self) -> Result<Self> {
        let numerator = self.numerator.diagonal();
        let factors: Vec<_> = self
            .denominator
            .iter()
            .map(|(f, e)| (f.diagonal(), *e))
            .collect();
        if let Some((f, _)) = factors
            .iter()
            .find(|(f, _)| f.is_constant() && f.constant().is_zero())
        {
            return Err(Error::DegenerateForm(format!(
                "diagonal substitution kills a denominator form ({f})"
            )));
        }
        Self::from_parts(numerator, factors)
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        let num = self.numerator.fmt_with(names);
        if self.denominator.is_empty() {
            return num;
        }
        let num = if self.numerator.len() > 1 || num.contains('/') {
            format!("({num})")
        } else {
            num
        };
        let parts: Vec<String> = self
            .denominator
            .iter()
            .map(|(f, e)| {
                if *e == 1 {
                    format!("({})", f.fmt_with(names))
                } else {
                    format!("({})^{}", f.fmt_with(names), e)
                }
            })
            .collect();
        if parts.len() == 1 {
            format!("{num}/{}", parts[0])
        } else {
            format!("{num}/({})", parts.join("*"))
        }
    }
}

impl fmt::Display for RationalFunctionNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&var_names(self.nvars())))
    }
}

/// Sum of `coefficient / prod(forms)` over the terms, in normal form.
pub fn sum_of_simple_terms(nvars: usize, terms: &[SimpleTerm]) -> Result<RationalFunctionNF> {
    sum_of_simple_terms_with(nvars, terms, Exec::default())
}

pub fn sum_of_simple_terms_with(
    nvars: usize,
    terms: &[SimpleTerm],
    exec: Exec,
) -> Result<RationalFunctionNF> {
    let symbolic = terms
        .iter()
        .filter(|t| matches!(t.coefficient, Coefficient::SymbolicK(_)))
        .count();
    if symbolic > 0 && symbolic < terms.len() {
        return Err(Error::MixedCoefficients);
    }

    // Each term as scalar / prod(primitive^e).
    let mut prepared: Vec<(Rational, BTreeMap<LinearForm, u32>)> = Vec::with_capacity(terms.len());
    for (idx, t) in terms.iter().enumerate() {
        if t.forms.is_empty() {
            return Err(Error::EmptyTerm(idx));
        }
        let mut scalar = match &t.coefficient {
            Coefficient::Rational(r) => r.clone(),
            Coefficient::SymbolicK(p) => p.as_constant().ok_or(Error::SymbolicNormalization)?,
        };
        let mut classes = BTreeMap::new();
        for f in &t.forms {
            if f.nvars() != nvars {
                return Err(Error::VariableMismatch(nvars, f.nvars()));
            }
            if f.is_constant() {
                return Err(Error::ConstantForm(f.to_string()));
            }
            let (c, p) = f.primitive();
            scalar /= c;
            *classes.entry(p).or_insert(0u32) += 1;
        }
        if !scalar.is_zero() {
            prepared.push((scalar, classes));
        }
    }

    let mut common: BTreeMap<LinearForm, u32> = BTreeMap::new();
    for (_, classes) in &prepared {
        for (f, e) in classes {
            let slot = common.entry(f.clone()).or_insert(0);
            *slot = (*slot).max(*e);
        }
    }
    let form_polys: BTreeMap<&LinearForm, MultiPoly> = common
        .keys()
        .map(|f| (f, MultiPoly::from_linear(f)))
        .collect();

    let numerator = exec.map_reduce(
        &prepared,
        |(scalar, classes)| {
            let mut p = MultiPoly::constant(nvars, scalar.clone());
            for (f, e) in &common {
                let missing = e - classes.get(f).copied().unwrap_or(0);
                if missing > 0 {
                    p = &p * &form_polys[f].pow(missing);
                }
            }
            p
        },
        || MultiPoly::zero(nvars),
        |a, b| &a + &b,
    );
    Ok(RationalFunctionNF::reduce(numerator, common))
}
