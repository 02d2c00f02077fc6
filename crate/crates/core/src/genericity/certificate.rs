use num_bigint::BigInt;

use crate::algebra::{LinearForm, Rational};
use crate::datasets;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::model::{ResolutionDatum, SECTION_ID};

use super::avg::{check_avg, AvgWitness};
use super::bs::{frak_l_membership, FrakLVector};
use super::order_one::certify_order_one;

pub const CONTINGENCY: &str = "contingent on log very-genericity of the section";

/// Largest last entry tried when searching for an element of the set of
/// admissible `l` vectors.
pub const FRAK_L_SEARCH_LIMIT: i64 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorCertificate {
    pub divisor: String,
    /// `a_W . s + n_W` in `p + 1` variables.
    pub hyperplane: LinearForm,
    /// `-n_W / N_W`.
    pub root: Rational,
    pub residue: Rational,
    pub non_resonance: Vec<AvgWitness>,
    /// Some `l = (1, ..., 1, t)` passing the membership test, if found.
    pub frak_l_witness: Option<Vec<BigInt>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub k: BigInt,
    pub k0: BigInt,
    pub label: &'static str,
    pub exceptional: Vec<DivisorCertificate>,
    /// Non-exceptional divisors, which contribute trivially.
    pub trivial: Vec<String>,
}

fn frak_l_witness(aug: &ResolutionDatum, w: &str) -> Result<Option<Vec<BigInt>>> {
    let q = aug.p;
    for t in 1..=FRAK_L_SEARCH_LIMIT {
        let mut l = vec![BigInt::from(1); q.saturating_sub(1)];
        l.push(t.into());
        let fl = FrakLVector::new(l.clone())?;
        if frak_l_membership(aug, w, &fl)? {
            return Ok(Some(l));
        }
    }
    Ok(None)
}

/// Assembles the hypotheses behind the root/polar-hyperplane statements for
/// every exceptional divisor; any failed hypothesis is an error naming it.
pub fn strong_mc_certificate(aug: &ResolutionDatum, k: &BigInt, exec: Exec) -> Result<Certificate> {
    let ample = aug.ample_vector()?;
    let avg = check_avg(aug, ample)?;
    if let Some(v) = avg.violations.first() {
        return Err(Error::NotLogVeryGeneric(format!(
            "{} and {}: n_W*b_W'/b_W = {} is an integer ({})",
            v.w, v.w_prime, v.value, v.relation
        )));
    }
    let order = certify_order_one(aug, k, exec)?;
    if let Some(e) = order.entries.iter().find(|e| !e.certified) {
        return Err(Error::Hypothesis(format!(
            "pole {} of {} is not certified of order one (order {}, residue sum {})",
            e.location, e.divisor, e.order, e.residue_sum
        )));
    }
    let numeric = if aug.is_symbolic() { aug.specialize(k)? } else { aug.clone() };
    let mut exceptional = Vec::new();
    for e in &order.entries {
        let d = numeric.divisor(&e.divisor)?;
        exceptional.push(DivisorCertificate {
            divisor: e.divisor.clone(),
            hyperplane: LinearForm::new(d.a.clone(), d.n.clone()),
            root: e.location.clone(),
            residue: e.residue_sum.clone(),
            non_resonance: avg.witnesses.iter().filter(|w| w.w == e.divisor).cloned().collect(),
            frak_l_witness: frak_l_witness(&numeric, &e.divisor)?,
        });
    }
    let trivial = numeric
        .divisors
        .iter()
        .filter(|d| !d.exceptional && d.id != SECTION_ID)
        .map(|d| d.id.clone())
        .collect();
    Ok(Certificate {
        k: k.clone(),
        k0: order.threshold.k0,
        label: CONTINGENCY,
        exceptional,
        trivial,
    })
}

/// Membership of `(b1, b2)` in the cones of the two-blow-up chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConeReport {
    pub rel: bool,
    pub vg: bool,
    pub a1: bool,
    pub a2: bool,
}

/// `rel`: `0 < b1 < b2 < 2 b1`; `vg`: `rel` and the chain passes the
/// non-resonance check; `a1`: `vg` and `2 b2 < 3 b1`; `a2`: `vg` and
/// `2 b2 > 3 b1`.
pub fn sixone_example_cones(b1: i64, b2: i64) -> Result<ConeReport> {
    if b1 <= 0 || b2 <= 0 {
        return Err(Error::Precondition("b coordinates must be positive".into()));
    }
    let rel = datasets::sixone_relatively_ample(b1, b2);
    let vg = rel && {
        let d = datasets::sixone_with(b1, b2, b1 + b2);
        check_avg(&d, d.ample_vector()?)?.verdict()
    };
    let report = ConeReport {
        rel,
        vg,
        a1: vg && 2 * b2 < 3 * b1,
        a2: vg && 2 * b2 > 3 * b1,
    };
    if report.a1 != (report.vg && !report.a2) {
        return Err(Error::Invalid(format!("cone invariant fails at ({b1}, {b2})")));
    }
    Ok(report)
}

/// Cone flags on the grid `1 <= b1, b2 <= max`, row-major in `b1`.
pub fn cone_grid(max: i64, exec: Exec) -> Result<Vec<((i64, i64), ConeReport)>> {
    let m = max.max(0) as usize;
    exec.map_range(0..m * m, |i| {
        let (b1, b2) = ((i / m) as i64 + 1, (i % m) as i64 + 1);
        sixone_example_cones(b1, b2).map(|r| ((b1, b2), r))
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use crate::genericity::augment;
    use crate::model::KValue;

    #[test]
    fn chain_certificate() {
        let aug = augment(&datasets::sixone(), &KValue::Symbolic).unwrap().datum;
        let c = strong_mc_certificate(&aug, &BigInt::from(5), Exec::Sequential).unwrap();
        let roots: Vec<_> = c.exceptional.iter().map(|e| e.root.clone()).collect();
        assert_eq!(roots, vec![rat(-2, 15), rat(-3, 20)]);
        assert_eq!(c.label, CONTINGENCY);
        assert!(c.exceptional.iter().all(|e| e.frak_l_witness.is_some()));
    }

    #[test]
    fn resonant_chain_refused() {
        let aug = augment(&datasets::sixone_with(2, 3, 4), &KValue::Symbolic).unwrap().datum;
        assert!(matches!(
            strong_mc_certificate(&aug, &BigInt::from(5), Exec::Sequential),
            Err(Error::NotLogVeryGeneric(_))
        ));
    }

    #[test]
    fn cone_examples() {
        let r = sixone_example_cones(2, 3).unwrap();
        assert!(r.rel && !r.vg);
        let r = sixone_example_cones(3, 4).unwrap();
        assert!(r.vg && r.a1 && !r.a2);
        let r = sixone_example_cones(3, 5).unwrap();
        assert!(r.rel && r.vg && r.a2 && !r.a1);
        assert!(!sixone_example_cones(3, 6).unwrap().rel);
    }
}
