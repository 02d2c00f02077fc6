//! Local monodromy zeta functions, their divisors on the torus as sums of
//! torsion-translated subtori, the monodromy support and the inclusion test
//! for exponentiated polar hyperplanes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::rational::{frac, from_big};
use crate::algebra::{LinearForm, Rational};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::model::ResolutionDatum;
use crate::topzeta::{analyze_poles, CandidateHyperplane};

/// Largest `gcd(a)` expanded into individual subtori.
pub const MAX_SUBTORI_PER_FACTOR: u64 = 1 << 20;

/// `prod (t^a - 1)^e` over a finitely supported map `a -> e`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MonodromyZetaFactors {
    pub q: usize,
    pub factors: BTreeMap<Vec<BigInt>, BigInt>,
}

impl MonodromyZetaFactors {
    pub fn new(q: usize) -> Self {
        MonodromyZetaFactors {
            q,
            factors: BTreeMap::new(),
        }
    }

    /// Multiplies in `(t^a - 1)^e`, dropping factors whose exponent cancels.
    pub fn push(&mut self, a: Vec<BigInt>, e: BigInt) -> Result<()> {
        if a.len() != self.q {
            return Err(Error::VariableMismatch(self.q, a.len()));
        }
        if a.iter().all(Zero::is_zero) {
            return Err(Error::DegenerateForm("t^0 - 1 vanishes identically".into()));
        }
        if a.iter().any(Signed::is_negative) {
            return Err(Error::Invalid("negative exponent vector".into()));
        }
        let slot = self.factors.entry(a.clone()).or_default();
        *slot += e;
        if slot.is_zero() {
            self.factors.remove(&a);
        }
        Ok(())
    }

    pub fn product(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (a, e) in &other.factors {
            out.push(a.clone(), e.clone())?;
        }
        Ok(out)
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }
}

impl fmt::Display for MonodromyZetaFactors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(a, e)| format!("({}-1)^{}", monomial(a), e))
            .collect();
        f.write_str(&parts.join("*"))
    }
}

fn monomial(a: &[BigInt]) -> String {
    let single = a.len() == 1;
    let parts: Vec<String> = a
        .iter()
        .enumerate()
        .filter(|(_, e)| !e.is_zero())
        .map(|(i, e)| {
            let base = if single { "t".to_string() } else { format!("t{}", i + 1) };
            if e.is_one() {
                base
            } else {
                format!("{base}^{e}")
            }
        })
        .collect();
    parts.join("*")
}

/// `{t : t^primitive = exp(2 pi i phase)}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subtorus {
    pub primitive: Vec<BigInt>,
    pub phase: Rational,
}

impl Subtorus {
    /// Canonicalizes: the primitive vector must be non-negative and nonzero;
    /// a common factor `g` is moved into the phase, which then describes a
    /// union of `g` subtori and is rejected.
    pub fn new(primitive: Vec<BigInt>, phase: Rational) -> Result<Self> {
        let g = primitive.iter().fold(BigInt::zero(), |g, a| g.gcd(a));
        if g.is_zero() {
            return Err(Error::DegenerateForm("zero exponent vector".into()));
        }
        if primitive.iter().any(Signed::is_negative) {
            return Err(Error::Invalid("subtorus exponent vector must be non-negative".into()));
        }
        if !g.is_one() {
            return Err(Error::Invalid(format!(
                "exponent vector has content {g}; not a primitive subtorus"
            )));
        }
        Ok(Subtorus {
            primitive,
            phase: frac(&phase),
        })
    }

    pub fn q(&self) -> usize {
        self.primitive.len()
    }

    /// Intersection with the diagonal `t1 = ... = tq = t`: the points with
    /// `t^|a0| = exp(2 pi i phase)`, one subtorus of the line per root.
    pub fn restrict_to_diagonal(&self) -> Result<Vec<Subtorus>> {
        let m: BigInt = self.primitive.iter().sum();
        let count = m
            .to_u64()
            .filter(|&c| c <= MAX_SUBTORI_PER_FACTOR)
            .ok_or_else(|| Error::TooLarge(format!("{m} roots on the diagonal")))?;
        let m_r = from_big(&m);
        (0..count)
            .map(|j| Subtorus::new(vec![BigInt::one()], (&self.phase + Rational::from_integer(j.into())) / &m_r))
            .collect()
    }
}

impl fmt::Display for Subtorus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.primitive.iter().map(|x| x.to_string()).collect();
        write!(f, "({}; {})", a.join(","), self.phase)
    }
}

/// Integer combination of subtori with no zero entries.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TorusDivisor {
    pub q: usize,
    pub components: BTreeMap<Subtorus, BigInt>,
}

impl TorusDivisor {
    pub fn new(q: usize) -> Self {
        TorusDivisor {
            q,
            components: BTreeMap::new(),
        }
    }

    pub fn add_component(&mut self, t: Subtorus, m: &BigInt) {
        let slot = self.components.entry(t.clone()).or_default();
        *slot += m;
        if slot.is_zero() {
            self.components.remove(&t);
        }
    }

    pub fn sum(&self, other: &TorusDivisor) -> TorusDivisor {
        let mut out = self.clone();
        for (t, m) in &other.components {
            out.add_component(t.clone(), m);
        }
        out
    }

    pub fn support(&self) -> BTreeSet<Subtorus> {
        self.components.keys().cloned().collect()
    }
}

/// The `d = gcd(a)` subtori making up `{t^a = 1}`.
pub fn factor_subtori(a: &[BigInt]) -> Result<Vec<Subtorus>> {
    let d = a.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if d.is_zero() {
        return Err(Error::DegenerateForm("t^0 - 1 vanishes identically".into()));
    }
    let count = d
        .to_u64()
        .filter(|&c| c <= MAX_SUBTORI_PER_FACTOR)
        .ok_or_else(|| Error::TooLarge(format!("factor splits into {d} subtori")))?;
    let a0: Vec<BigInt> = a.iter().map(|x| x / &d).collect();
    let d_r = from_big(&d);
    (0..count)
        .map(|j| Subtorus::new(a0.clone(), Rational::from_integer(j.into()) / &d_r))
        .collect()
}

/// Divisor of zeros and poles of a product of `(t^a - 1)^e`.
pub fn torus_divisor(zeta: &MonodromyZetaFactors) -> Result<TorusDivisor> {
    let mut out = TorusDivisor::new(zeta.q);
    for (a, e) in &zeta.factors {
        for t in factor_subtori(a)? {
            out.add_component(t, e);
        }
    }
    Ok(out)
}

fn numeric_entries(datum: &ResolutionDatum, point_id: &str) -> Result<Vec<(String, Vec<BigInt>, BigInt)>> {
    if datum.is_symbolic() {
        return Err(Error::SymbolicChi(
            "the datum depends on k; specialize it first".into(),
        ));
    }
    if datum.tuple_len() == 0 {
        return Err(Error::Precondition(
            "datum has no multiplicity columns (augment it first)".into(),
        ));
    }
    let x = datum.point(point_id)?;
    x.entries
        .iter()
        .map(|e| {
            let chi = e.chi.value_at(None, &format!("point {point_id}"))?;
            Ok((e.divisor.clone(), datum.multiplicities(&e.divisor)?, chi))
        })
        .collect()
}

/// `prod_W (t^{a_W} - 1)^{-chi(W° ∩ fibre)}` at one point.
pub fn local_monodromy_zeta(datum: &ResolutionDatum, point_id: &str) -> Result<MonodromyZetaFactors> {
    let mut z = MonodromyZetaFactors::new(datum.tuple_len());
    for (_, a, chi) in numeric_entries(datum, point_id)? {
        if !chi.is_zero() {
            z.push(a, -chi)?;
        }
    }
    Ok(z)
}

/// One divisor's share of a subtorus multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contribution {
    pub divisor: String,
    pub local_chi: BigInt,
    pub multiplicity: BigInt,
}

/// Subtori at a point whose contributions sum to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cancellation {
    pub point: String,
    pub subtorus: Subtorus,
    pub contributions: Vec<Contribution>,
}

/// Every subtorus met by some factor at the point, with per-divisor shares.
pub fn traced_divisor(
    datum: &ResolutionDatum,
    point_id: &str,
) -> Result<BTreeMap<Subtorus, Vec<Contribution>>> {
    let mut out: BTreeMap<Subtorus, Vec<Contribution>> = BTreeMap::new();
    for (id, a, chi) in numeric_entries(datum, point_id)? {
        if chi.is_zero() {
            continue;
        }
        for t in factor_subtori(&a)? {
            out.entry(t).or_default().push(Contribution {
                divisor: id.clone(),
                local_chi: chi.clone(),
                multiplicity: -chi.clone(),
            });
        }
    }
    Ok(out)
}

/// Subtori whose net multiplicity cancels to zero, at every point.
pub fn cancellation_diagnostics(datum: &ResolutionDatum) -> Result<Vec<Cancellation>> {
    let mut out = Vec::new();
    for x in &datum.points {
        for (t, contributions) in traced_divisor(datum, &x.id)? {
            let net: BigInt = contributions.iter().map(|c| &c.multiplicity).sum();
            if net.is_zero() {
                out.push(Cancellation {
                    point: x.id.clone(),
                    subtorus: t,
                    contributions,
                });
            }
        }
    }
    Ok(out)
}

pub fn monodromy_support(datum: &ResolutionDatum) -> Result<BTreeSet<Subtorus>> {
    monodromy_support_with(datum, Exec::default())
}

/// Union over the points of the supports of their torus divisors.
pub fn monodromy_support_with(datum: &ResolutionDatum, exec: Exec) -> Result<BTreeSet<Subtorus>> {
    if datum.points.is_empty() {
        return Err(Error::EmptyPointList);
    }
    let per_point = exec.map(&datum.points, |x| {
        local_monodromy_zeta(datum, &x.id).and_then(|z| torus_divisor(&z))
    });
    let mut out = BTreeSet::new();
    for d in per_point {
        out.extend(d?.support());
    }
    Ok(out)
}

/// Closure of the image of `{a . s + n = 0}` under `s -> exp(2 pi i s)`.
pub fn exp_hyperplane(form: &LinearForm) -> Result<Subtorus> {
    let d = form.coefficient_gcd();
    if d.is_zero() {
        return Err(Error::ConstantForm(form.to_string()));
    }
    let d = d.abs();
    let primitive = form.coeffs().iter().map(|a| a / &d).collect();
    Subtorus::new(primitive, -from_big(form.constant()) / from_big(&d))
}

pub fn exp_candidate(h: &CandidateHyperplane) -> Result<Subtorus> {
    exp_hyperplane(&h.form)
}

/// Support intersected with the diagonal torus.
pub fn restrict_support_to_diagonal(support: &BTreeSet<Subtorus>) -> Result<BTreeSet<Subtorus>> {
    let mut out = BTreeSet::new();
    for t in support {
        out.extend(t.restrict_to_diagonal()?);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleCheck {
    pub class: LinearForm,
    pub divisors: Vec<String>,
    pub order: u32,
    pub exp: Subtorus,
    pub in_support: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MCReport {
    /// Actual polar hyperplanes.
    pub poles: Vec<PoleCheck>,
    /// Every candidate, including those that cancelled (order 0).
    pub candidates: Vec<PoleCheck>,
    pub support: BTreeSet<Subtorus>,
    pub cancellations: Vec<Cancellation>,
    pub verdict: bool,
}

impl MCReport {
    pub fn witnesses(&self) -> impl Iterator<Item = &PoleCheck> {
        self.poles.iter().filter(|p| !p.in_support)
    }
}

pub fn check_monodromy_conjecture(datum: &ResolutionDatum) -> Result<MCReport> {
    check_monodromy_conjecture_with(datum, Exec::default())
}

/// Tests `Exp(poles) ⊂ support` one polar hyperplane at a time.
pub fn check_monodromy_conjecture_with(datum: &ResolutionDatum, exec: Exec) -> Result<MCReport> {
    let report = analyze_poles(datum, exec)?;
    let support = monodromy_support_with(datum, exec)?;
    let mut poles = Vec::new();
    for pc in &report.classes {
        let exp = exp_hyperplane(&pc.class)?;
        let check = PoleCheck {
            class: pc.class.clone(),
            divisors: pc.divisors.clone(),
            order: pc.order,
            in_support: support.contains(&exp),
            exp,
        };
        if check.order > 0 {
            poles.push(check);
        }
    }
    let candidates = report
        .candidates
        .iter()
        .map(|c| {
            let exp = exp_candidate(&c.candidate)?;
            Ok(PoleCheck {
                class: c.candidate.form.clone(),
                divisors: vec![c.candidate.divisor.clone()],
                order: c.order,
                in_support: support.contains(&exp),
                exp,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let verdict = poles.iter().all(|p| p.in_support);
    Ok(MCReport {
        poles,
        candidates,
        cancellations: cancellation_diagnostics(datum)?,
        support,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};
    use crate::datasets;

    fn b(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    fn phases(s: &BTreeSet<Subtorus>) -> Vec<Rational> {
        s.iter().map(|t| t.phase.clone()).collect()
    }

    #[test]
    fn cusp_origin() {
        let d = datasets::cusp();
        let z = local_monodromy_zeta(&d, "origin").unwrap();
        assert_eq!(z.to_string(), "(t^2-1)^-1*(t^3-1)^-1*(t^6-1)^1");
        let div = torus_divisor(&z).unwrap();
        let got: Vec<_> = div.components.iter().map(|(t, m)| (t.phase.clone(), m.clone())).collect();
        assert_eq!(
            got,
            vec![(int(0), (-1).into()), (rat(1, 6), 1.into()), (rat(5, 6), 1.into())]
        );
        let cancelled = cancellation_diagnostics(&d).unwrap();
        let cphases: Vec<_> = cancelled.iter().map(|c| c.subtorus.phase.clone()).collect();
        assert_eq!(cphases, vec![rat(1, 3), rat(1, 2), rat(2, 3)]);
        assert_eq!(cancelled[1].contributions.len(), 2);
    }

    #[test]
    fn supports() {
        let cusp = monodromy_support(&datasets::cusp()).unwrap();
        assert_eq!(phases(&cusp), vec![int(0), rat(1, 6), rat(5, 6)]);
        let node = monodromy_support(&datasets::node()).unwrap();
        let prims: Vec<_> = node.iter().map(|t| t.primitive.clone()).collect();
        assert_eq!(prims, vec![b(&[0, 1]), b(&[1, 0])]);
        assert!(local_monodromy_zeta(&datasets::node(), "origin").unwrap().is_one());
        let smooth = monodromy_support(&datasets::smooth()).unwrap();
        assert_eq!(phases(&smooth), vec![int(0)]);
    }

    #[test]
    fn unknown_point_and_empty_list() {
        let d = datasets::cusp();
        assert_eq!(
            local_monodromy_zeta(&d, "nowhere"),
            Err(Error::UnknownPoint("nowhere".into()))
        );
        let mut e = d.clone();
        e.points.clear();
        assert_eq!(monodromy_support(&e), Err(Error::EmptyPointList));
    }

    #[test]
    fn exp_examples() {
        let t = exp_hyperplane(&LinearForm::from_i64(&[6], 5)).unwrap();
        assert_eq!((t.primitive, t.phase), (b(&[1]), rat(1, 6)));
        let t = exp_hyperplane(&LinearForm::from_i64(&[2, 3], 5)).unwrap();
        assert_eq!((t.primitive, t.phase), (b(&[2, 3]), int(0)));
        let t = exp_hyperplane(&LinearForm::from_i64(&[2, 2], 1)).unwrap();
        assert_eq!((t.primitive, t.phase), (b(&[1, 1]), rat(1, 2)));
        assert!(exp_hyperplane(&LinearForm::from_i64(&[0], 1)).is_err());
    }

    #[test]
    fn mc_on_classical_data() {
        for d in [datasets::cusp(), datasets::node(), datasets::smooth()] {
            assert!(check_monodromy_conjecture(&d).unwrap().verdict);
        }
    }

    #[test]
    fn mc_fails_without_local_data() {
        let mut d = datasets::cusp();
        for x in &mut d.points {
            for e in &mut x.entries {
                e.chi = crate::model::Chi::int(0);
            }
        }
        let r = check_monodromy_conjecture(&d).unwrap();
        assert!(!r.verdict);
        assert_eq!(r.witnesses().count(), 2);
    }

    #[test]
    fn factor_splits_into_d_subtori() {
        let s = factor_subtori(&b(&[4, 6])).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.iter().all(|t| t.primitive == b(&[2, 3])));
        let mut z = MonodromyZetaFactors::new(1);
        z.push(b(&[2]), 1.into()).unwrap();
        z.push(b(&[2]), (-1).into()).unwrap();
        assert!(torus_divisor(&z).unwrap().components.is_empty());
    }

    #[test]
    fn diagonal_restriction() {
        let t = Subtorus::new(b(&[1, 1]), rat(1, 2)).unwrap();
        let r = t.restrict_to_diagonal().unwrap();
        let ph: Vec<_> = r.iter().map(|x| x.phase.clone()).collect();
        assert_eq!(ph, vec![rat(1, 4), rat(3, 4)]);
    }
}
