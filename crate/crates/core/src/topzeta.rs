//! The topological zeta function of a resolution datum, its candidate and
//! actual poles, first-order residues and the diagonal specialization.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::rational::from_big;
use crate::algebra::{sum_of_simple_terms_with, LinearForm, Rational, RationalFunctionNF, SimpleTerm};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::model::ResolutionDatum;

/// The form `a_W . s + n_W` proposed by one divisor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateHyperplane {
    pub divisor: String,
    pub form: LinearForm,
}

impl CandidateHyperplane {
    /// Primitive representative of the proportionality class.
    pub fn class(&self) -> LinearForm {
        self.form.primitive().1
    }
}

/// One candidate per divisor, in datum order.
pub fn candidates(datum: &ResolutionDatum) -> Result<Vec<CandidateHyperplane>> {
    let q = datum.tuple_len();
    datum
        .divisors
        .iter()
        .map(|d| {
            let a = datum.multiplicities(&d.id)?;
            if a.len() != q {
                return Err(Error::Invalid(format!(
                    "divisor {}: expected {q} multiplicities, got {}",
                    d.id,
                    a.len()
                )));
            }
            let form = LinearForm::candidate(a, d.n.clone()).map_err(|e| match e {
                Error::ConstantForm(_) => Error::ConstantForm(format!(
                    "divisor {} has a zero multiplicity vector",
                    d.id
                )),
                other => other,
            })?;
            Ok(CandidateHyperplane {
                divisor: d.id.clone(),
                form,
            })
        })
        .collect()
}

pub fn build_topzeta(datum: &ResolutionDatum) -> Result<RationalFunctionNF> {
    build_topzeta_with(datum, Exec::default())
}

/// `sum over strata of chi(W°_J') * prod_{W in J'} 1/(a_W . s + n_W)`.
pub fn build_topzeta_with(datum: &ResolutionDatum, exec: Exec) -> Result<RationalFunctionNF> {
    if datum.is_symbolic() {
        return Err(Error::SymbolicChi(
            "the datum depends on k; specialize it first".into(),
        ));
    }
    let q = datum.tuple_len();
    if q == 0 {
        return Err(Error::Precondition(
            "datum has no multiplicity columns (augment it first)".into(),
        ));
    }
    let cands = candidates(datum)?;
    let forms: BTreeMap<&str, &LinearForm> = cands
        .iter()
        .map(|c| (c.divisor.as_str(), &c.form))
        .collect();
    let mut terms = Vec::new();
    for (s, chi) in datum.numeric_strata()? {
        if chi.is_zero() {
            continue;
        }
        let fs = s
            .divisors
            .iter()
            .map(|id| {
                forms
                    .get(id.as_str())
                    .map(|f| (*f).clone())
                    .ok_or_else(|| Error::UnknownDivisor(id.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        terms.push(SimpleTerm::new(from_big(&chi), fs));
    }
    sum_of_simple_terms_with(q, &terms, exec)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateOrder {
    pub candidate: CandidateHyperplane,
    pub order: u32,
}

/// Per proportionality class view of the candidates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleClass {
    pub class: LinearForm,
    pub divisors: Vec<String>,
    pub order: u32,
    /// The pole `-n/a` when there is a single variable.
    pub location: Option<Rational>,
    /// Largest number of divisors of the class sharing a nonempty stratum,
    /// when the datum is known.
    pub stratum_bound: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleReport {
    pub candidates: Vec<CandidateOrder>,
    pub classes: Vec<PoleClass>,
    pub zeta: RationalFunctionNF,
}

impl PoleReport {
    /// Classes with order at least one.
    pub fn actual(&self) -> impl Iterator<Item = &PoleClass> {
        self.classes.iter().filter(|c| c.order > 0)
    }

    pub fn order_of(&self, form: &LinearForm) -> u32 {
        let class = form.primitive().1;
        self.classes
            .iter()
            .find(|c| c.class == class)
            .map_or(0, |c| c.order)
    }
}

fn class_order(z: &RationalFunctionNF, class: &LinearForm) -> u32 {
    let e = z.class_exponent(class);
    let (_, m) = z.numerator().divide_out(class);
    e.saturating_sub(m)
}

/// Pole order of every candidate in a normalized zeta function.
pub fn pole_orders(z: &RationalFunctionNF, cands: &[CandidateHyperplane]) -> PoleReport {
    let mut classes: BTreeMap<LinearForm, Vec<String>> = BTreeMap::new();
    let candidates = cands
        .iter()
        .map(|c| {
            let class = c.class();
            classes.entry(class.clone()).or_default().push(c.divisor.clone());
            CandidateOrder {
                candidate: c.clone(),
                order: class_order(z, &class),
            }
        })
        .collect();
    let classes = classes
        .into_iter()
        .map(|(class, divisors)| PoleClass {
            order: class_order(z, &class),
            location: (class.nvars() == 1)
                .then(|| -from_big(class.constant()) / from_big(&class.coeffs()[0])),
            class,
            divisors,
            stratum_bound: None,
        })
        .collect();
    PoleReport {
        candidates,
        classes,
        zeta: z.clone(),
    }
}

/// Builds the zeta function and its pole report, filling in the stratum
/// bound of each class.
pub fn analyze_poles(datum: &ResolutionDatum, exec: Exec) -> Result<PoleReport> {
    let z = build_topzeta_with(datum, exec)?;
    let cands = candidates(datum)?;
    let mut report = pole_orders(&z, &cands);
    let class_of: BTreeMap<&str, LinearForm> = cands
        .iter()
        .map(|c| (c.divisor.as_str(), c.class()))
        .collect();
    for pc in &mut report.classes {
        let bound = datum
            .strata
            .iter()
            .filter(|s| s.is_nonempty())
            .map(|s| {
                s.divisors
                    .iter()
                    .filter(|id| class_of.get(id.as_str()) == Some(&pc.class))
                    .count() as u32
            })
            .max()
            .unwrap_or(0);
        pc.stratum_bound = Some(bound);
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Residue {
    /// One variable: `(a s + n) Z` evaluated at `s = -n/a`.
    Value(Rational),
    /// Several variables: `(a . s + n) Z` restricted to the hyperplane, with
    /// variable `eliminated` (0-based) solved for.
    Restricted {
        eliminated: usize,
        function: RationalFunctionNF,
    },
}

/// Residue along a simple polar hyperplane, multiplying by the raw form.
pub fn residue_first_order(z: &RationalFunctionNF, h: &CandidateHyperplane) -> Result<Residue> {
    let class = h.class();
    let order = class_order(z, &class);
    if order != 1 {
        return Err(Error::NotSimplePole {
            form: h.form.to_string(),
            order,
        });
    }
    let lifted = z.mul_form(&h.form)?;
    let (j, restricted) = lifted.restrict(&h.form)?;
    if z.nvars() == 1 {
        let v = restricted
            .numerator()
            .as_constant()
            .filter(|_| restricted.denominator().is_empty())
            .ok_or_else(|| Error::Invalid("residue did not reduce to a constant".into()))?;
        return Ok(Residue::Value(v));
    }
    Ok(Residue::Restricted {
        eliminated: j,
        function: restricted,
    })
}

/// `s1 = ... = sq = s`.
pub fn specialize_diagonal(z: &RationalFunctionNF) -> Result<RationalFunctionNF> {
    z.diagonal()
}

/// `-n/a` for a one-variable form.
pub fn root_of(form: &LinearForm) -> Option<Rational> {
    match form.coeffs() {
        [a] if !a.is_zero() => Some(-from_big(form.constant()) / from_big(a)),
        _ => None,
    }
}

/// `N_W` of the product case: the sum of all columns.
pub fn total_multiplicity(form: &LinearForm) -> BigInt {
    form.coeffs().iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};
    use crate::datasets;

    #[test]
    fn cusp_zeta_and_poles() {
        let d = datasets::cusp();
        let z = build_topzeta(&d).unwrap();
        assert_eq!(z.to_string(), "(4*s+5)/((s+1)*(6*s+5))");
        assert_eq!(z.eval(&[int(0)]), Some(int(1)));
        let r = analyze_poles(&d, Exec::Sequential).unwrap();
        let orders: Vec<_> = r.classes.iter().map(|c| (c.location.clone().unwrap(), c.order)).collect();
        assert_eq!(orders, vec![(int(-1), 1), (rat(-5, 6), 1)]);
        let e3 = r.candidates.iter().find(|c| c.candidate.divisor == "E3").unwrap();
        assert_eq!(
            residue_first_order(&z, &e3.candidate).unwrap(),
            Residue::Value(int(10))
        );
    }

    #[test]
    fn node_and_smooth() {
        let z = build_topzeta(&datasets::node()).unwrap();
        assert_eq!(z.to_string(), "1/((s1+1)*(s2+1))");
        assert_eq!(specialize_diagonal(&z).unwrap().to_string(), "1/(s+1)^2");
        assert_eq!(build_topzeta(&datasets::smooth()).unwrap().to_string(), "1/(s+1)");
    }

    #[test]
    fn proportional_candidate_and_restriction() {
        let z = build_topzeta(&datasets::node()).unwrap();
        let h = CandidateHyperplane {
            divisor: "X2".into(),
            form: LinearForm::from_i64(&[2, 0], 2),
        };
        let r = pole_orders(&z, std::slice::from_ref(&h));
        assert_eq!(r.candidates[0].order, 1);
        let res = residue_first_order(&z, &h).unwrap();
        // raw form 2*s1+2 doubles the monic residue
        match res {
            Residue::Restricted { eliminated, function } => {
                assert_eq!(eliminated, 0);
                assert_eq!(function.to_string(), "2/(s2+1)");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cancelled_candidate_has_order_zero() {
        use crate::algebra::MultiPoly;
        let s1 = LinearForm::from_i64(&[1], 1);
        let z = RationalFunctionNF::from_parts(
            MultiPoly::from_linear(&s1),
            [(s1.clone(), 1), (LinearForm::from_i64(&[2], 3), 1)],
        )
        .unwrap();
        let h = CandidateHyperplane { divisor: "S".into(), form: s1 };
        assert_eq!(pole_orders(&z, std::slice::from_ref(&h)).candidates[0].order, 0);
        assert!(matches!(
            residue_first_order(&z, &h),
            Err(Error::NotSimplePole { order: 0, .. })
        ));
    }

    #[test]
    fn symbolic_and_columnless_data_rejected() {
        let six = datasets::sixone();
        assert!(matches!(build_topzeta(&six), Err(Error::Precondition(_))));
    }
}
