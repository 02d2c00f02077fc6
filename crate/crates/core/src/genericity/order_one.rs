use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::rational::from_big;
use crate::algebra::{LinearForm, Rational};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::model::{KValue, ResolutionDatum, SECTION_ID};
use crate::topzeta::{build_topzeta_with, pole_orders, residue_first_order, CandidateHyperplane, Residue};

/// `N_W(k) = a_W + slope*k` with the discrepancy `n_W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionLine {
    pub id: String,
    pub exceptional: bool,
    pub n: BigInt,
    pub a: BigInt,
    pub slope: BigInt,
}

impl SectionLine {
    pub fn big_n(&self, k: &BigInt) -> BigInt {
        &self.a + &self.slope * k
    }

    /// `-n_W / N_W(k)`; `None` when `N_W(k) = 0`.
    pub fn location(&self, k: &BigInt) -> Option<Rational> {
        let n = self.big_n(k);
        (!n.is_zero()).then(|| Rational::new(-self.n.clone(), n))
    }
}

/// The product-case data of every divisor of an augmented datum, in either
/// mode; `H` has `N = 1`.
pub fn section_lines(datum: &ResolutionDatum) -> Result<Vec<SectionLine>> {
    if datum.augmented.is_none() {
        return Err(Error::Precondition("datum is not augmented".into()));
    }
    let base = datum.base_p();
    datum
        .divisors
        .iter()
        .map(|d| {
            let mut a: BigInt = d.a.iter().take(base).sum();
            let slope = if d.exceptional {
                datum.b_of(&d.id).ok_or_else(|| {
                    Error::MissingAmple(format!("no b coordinate for exceptional divisor {}", d.id))
                })?
            } else {
                BigInt::zero()
            };
            if d.id == SECTION_ID {
                a += 1;
            }
            Ok(SectionLine {
                id: d.id.clone(),
                exceptional: d.exceptional,
                n: d.n.clone(),
                a,
                slope,
            })
        })
        .collect()
}

/// A value of `k` at which two pole locations coincide.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coincidence {
    pub w: String,
    pub w_prime: String,
    pub k: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Threshold {
    pub k0: BigInt,
    pub witnesses: Vec<Coincidence>,
}

/// Smallest `k0` such that for `k >= k0` no pair with an exceptional member
/// has `n_W / N_W(k) = n_W' / N_W'(k)`.
///
/// Each pair gives `k (n_W b_W' - n_W' b_W) = n_W' a_W - n_W a_W'`; an
/// identity in `k` is an error.
pub fn pole_separation_threshold(datum: &ResolutionDatum) -> Result<Threshold> {
    let lines = section_lines(datum)?;
    let mut k0 = BigInt::one();
    let mut witnesses = Vec::new();
    for (i, w) in lines.iter().enumerate() {
        for w2 in &lines[i + 1..] {
            if !w.exceptional && !w2.exceptional {
                continue;
            }
            let coef = &w.n * &w2.slope - &w2.n * &w.slope;
            let rhs = &w2.n * &w.a - &w.n * &w2.a;
            if coef.is_zero() {
                if rhs.is_zero() {
                    let (e, o) = if w.exceptional { (w, w2) } else { (w2, w) };
                    return Err(Error::NotLogVeryGeneric(format!(
                        "poles of {} and {} coincide for every k: (n_{}/b_{})*b_{} = n_{} \
                         ({}/{} * {} = {})",
                        e.id, o.id, e.id, e.id, o.id, o.id, e.n, e.slope, o.slope, o.n
                    )));
                }
                continue;
            }
            let k = Rational::new(rhs, coef);
            if k.is_integer() && k.is_positive() {
                let k = k.to_integer();
                if k >= k0 {
                    k0 = &k + 1;
                }
                witnesses.push(Coincidence {
                    w: w.id.clone(),
                    w_prime: w2.id.clone(),
                    k,
                });
            }
        }
    }
    // N_W(k) must stay positive from k0 on.
    for l in &lines {
        while !l.big_n(&k0).is_positive() {
            if !l.slope.is_positive() {
                return Err(Error::Invalid(format!("divisor {} has N_W <= 0", l.id)));
            }
            k0 += 1;
        }
    }
    witnesses.sort_by(|a, b| a.k.cmp(&b.k).then_with(|| (&a.w, &a.w_prime).cmp(&(&b.w, &b.w_prime))));
    Ok(Threshold { k0, witnesses })
}

/// Pairs of divisors sharing a pole location at `k`.
pub fn coincidences_at(lines: &[SectionLine], k: &BigInt) -> Vec<(String, String)> {
    let mut seen: BTreeMap<Rational, Vec<&str>> = BTreeMap::new();
    for l in lines {
        if let Some(loc) = l.location(k) {
            seen.entry(loc).or_default().push(&l.id);
        }
    }
    let mut out = Vec::new();
    for ids in seen.values() {
        for (i, a) in ids.iter().enumerate() {
            for b in &ids[i + 1..] {
                out.push((a.to_string(), b.to_string()));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderOneEntry {
    pub divisor: String,
    pub big_n: BigInt,
    pub n: BigInt,
    pub location: Rational,
    /// `sum chi(W°_{J' u W}) prod N_W/(N_W n_W' - N_W' n_W)`.
    pub residue_sum: Rational,
    /// Order of the product-case pole in the normal form.
    pub order: u32,
    /// Order of `a_W . s + n_W` in the tuple zeta function.
    pub tuple_order: u32,
    /// Residue sum and normal form agree.
    pub consistent: bool,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderOneReport {
    pub k: BigInt,
    pub threshold: Threshold,
    pub entries: Vec<OrderOneEntry>,
    pub section: Option<OrderOneEntry>,
}

impl OrderOneReport {
    pub fn verdict(&self) -> bool {
        self.entries.iter().all(|e| e.certified)
    }
}

/// Residue sum of the product-case pole of `W`, straight from the strata.
pub fn residue_sum(datum: &ResolutionDatum, w: &str) -> Result<Rational> {
    let numeric = |id: &str| -> Result<(BigInt, BigInt)> {
        let d = datum.divisor(id)?;
        Ok((d.a.iter().sum(), d.n.clone()))
    };
    let (big_n, n) = numeric(w)?;
    let mut total = Rational::zero();
    for (s, chi) in datum.numeric_strata()? {
        if chi.is_zero() || !s.divisors.iter().any(|d| d == w) {
            continue;
        }
        let mut term = from_big(&chi);
        for other in s.divisors.iter().filter(|d| *d != w) {
            let (big_n2, n2) = numeric(other)?;
            let den = &big_n * &n2 - &big_n2 * &n;
            if den.is_zero() {
                return Err(Error::ZeroDenominator(format!(
                    "{w} and {other} share the pole -{n}/{big_n}"
                )));
            }
            term *= Rational::new(big_n.clone(), den);
        }
        total += term;
    }
    Ok(total)
}

/// Certifies that every exceptional candidate pole has order one at `k`,
/// cross-checking the residue sum against the normalized zeta function.
pub fn certify_order_one(aug: &ResolutionDatum, k: &BigInt, exec: Exec) -> Result<OrderOneReport> {
    let threshold = pole_separation_threshold(aug)?;
    if k < &threshold.k0 {
        return Err(Error::Precondition(format!(
            "k={k} is below the separation threshold k0={}",
            threshold.k0
        )));
    }
    let numeric = match &aug.augmented {
        Some(a) if a.k == KValue::Symbolic => aug.specialize(k)?,
        Some(_) => {
            if aug.numeric_k() != Some(k) {
                return Err(Error::Precondition(format!(
                    "datum is specialized at k={}, not {k}",
                    aug.numeric_k().expect("numeric")
                )));
            }
            aug.clone()
        }
        None => return Err(Error::Precondition("datum is not augmented".into())),
    };
    let product = numeric.diagonal_datum()?;
    let z1 = build_topzeta_with(&product, exec)?;
    let zt = build_topzeta_with(&numeric, exec)?;

    let ids: Vec<String> = numeric
        .divisors
        .iter()
        .filter(|d| d.exceptional || d.id == SECTION_ID)
        .map(|d| d.id.clone())
        .collect();
    let results = exec.map(&ids, |id| -> Result<OrderOneEntry> {
        let d = numeric.divisor(id)?;
        let big_n: BigInt = d.a.iter().sum();
        let form = LinearForm::new(vec![big_n.clone()], d.n.clone());
        let cand = CandidateHyperplane {
            divisor: id.clone(),
            form: form.clone(),
        };
        let order = pole_orders(&z1, std::slice::from_ref(&cand)).candidates[0].order;
        let tuple = CandidateHyperplane {
            divisor: id.clone(),
            form: LinearForm::new(d.a.clone(), d.n.clone()),
        };
        let tuple_order = pole_orders(&zt, std::slice::from_ref(&tuple)).candidates[0].order;
        let rs = residue_sum(&product, id)?;
        let consistent = match order {
            0 => rs.is_zero(),
            1 => matches!(residue_first_order(&z1, &cand)?, Residue::Value(v) if v == rs),
            _ => false,
        };
        Ok(OrderOneEntry {
            divisor: id.clone(),
            location: Rational::new(-d.n.clone(), big_n.clone()),
            big_n,
            n: d.n.clone(),
            certified: consistent && order == 1 && tuple_order == 1 && !rs.is_zero(),
            residue_sum: rs,
            order,
            tuple_order,
            consistent,
        })
    });
    let mut entries = Vec::new();
    let mut section = None;
    for r in results {
        let e = r?;
        if e.divisor == SECTION_ID {
            section = Some(e);
        } else {
            entries.push(e);
        }
    }
    Ok(OrderOneReport {
        k: k.clone(),
        threshold,
        entries,
        section,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};
    use crate::datasets;
    use crate::genericity::augment;
    use crate::model::{Chi, Divisor, Stratum};

    fn big(v: i64) -> BigInt {
        v.into()
    }

    fn line(id: &str, exc: bool, n: i64, a: i64, b: i64) -> Divisor {
        Divisor {
            id: id.into(),
            exceptional: exc,
            n: big(n),
            a: vec![big(a)],
            b: exc.then(|| big(b)),
        }
    }

    fn symbolic(divisors: Vec<Divisor>) -> ResolutionDatum {
        let mut strata: Vec<Stratum> = divisors
            .iter()
            .map(|d| Stratum::new(&[d.id.as_str()], Chi::int(1)))
            .collect();
        strata.push(Stratum::new(&["H"], Chi::int(1)));
        let mut divisors = divisors;
        divisors.push(Divisor {
            id: "H".into(),
            exceptional: false,
            n: big(1),
            a: vec![big(0)],
            b: None,
        });
        ResolutionDatum {
            ambient_dim: 2,
            p: 1,
            divisors,
            strata,
            points: vec![],
            ample: None,
            degrees: None,
            adjacent_pairs: None,
            section: None,
            augmented: Some(crate::model::Augmentation { k: KValue::Symbolic }),
        }
    }

    #[test]
    fn threshold_examples() {
        let d = symbolic(vec![line("W", true, 2, 0, 3), line("V", true, 3, 0, 4)]);
        let t = pole_separation_threshold(&d).unwrap();
        assert!(t.witnesses.iter().all(|c| !(c.w == "W" && c.w_prime == "V")));

        let d = symbolic(vec![line("W", true, 2, 0, 1), line("S", false, 1, 4, 0)]);
        let t = pole_separation_threshold(&d).unwrap();
        assert_eq!(t.k0, big(9));
        assert!(t.witnesses.contains(&Coincidence { w: "W".into(), w_prime: "S".into(), k: big(8) }));
        let lines = section_lines(&d).unwrap();
        assert!(!coincidences_at(&lines, &big(8)).is_empty());
        assert!(coincidences_at(&lines, &big(9)).is_empty());

        let d = symbolic(vec![line("W", true, 2, 1, 3), line("V", true, 4, 2, 6)]);
        assert!(matches!(pole_separation_threshold(&d), Err(Error::NotLogVeryGeneric(_))));
    }

    #[test]
    fn chain_order_one() {
        let aug = augment(&datasets::sixone(), &KValue::Symbolic).unwrap().datum;
        let t = pole_separation_threshold(&aug).unwrap();
        assert_eq!(t.k0, big(1));
        // W2's residue sum is (9 - 9k)/(4k - 3): no pole at k = 1
        let r = certify_order_one(&aug, &big(1), Exec::Sequential).unwrap();
        assert_eq!((r.entries[1].order, r.entries[1].residue_sum.clone()), (0, int(0)));
        assert!(r.entries[1].consistent && !r.verdict());
        for k in 2..8 {
            assert_eq!(
                residue_sum(&aug.specialize(&big(k)).unwrap().diagonal_datum().unwrap(), "W2").unwrap(),
                rat(9 - 9 * k, 4 * k - 3)
            );
            let r = certify_order_one(&aug, &big(k), Exec::Sequential).unwrap();
            assert!(r.verdict(), "k={k}: {r:?}");
            assert!(r.entries.iter().all(|e| e.consistent));
            assert_eq!(r.section.as_ref().unwrap().tuple_order, 1);
        }
        let r = certify_order_one(&aug, &big(10), Exec::Parallel).unwrap();
        assert_eq!(r.entries[0].location, rat(-2, 30));
        assert_eq!(r.entries[1].location, rat(-3, 40));
    }

    #[test]
    fn chain_residue_by_hand() {
        // W1 at k: chi(W1°) = 1-2k, {W1,W2} = 1, {W1,H} = 2k;
        // N = (3k, 4k, 1), n = (2, 3, 1).
        let k = 2;
        let aug = augment(&datasets::sixone(), &KValue::Numeric(big(k))).unwrap().datum;
        let prod = aug.diagonal_datum().unwrap();
        let n1 = rat(3 * k, 1);
        let expected = int(1 - 2 * k)
            + &n1 / (&n1 * int(3) - int(4 * k) * int(2))
            + int(2 * k) * &n1 / (&n1 * int(1) - int(2));
        assert_eq!(residue_sum(&prod, "W1").unwrap(), expected);
    }

    #[test]
    fn fabricated_vanishing_residue() {
        // a single exceptional curve with chi(W°) = 0 and no neighbours
        let mut d = symbolic(vec![line("W", true, 2, 0, 3)]);
        d.strata[0].chi = Chi::int(0);
        d.strata[0].nonempty = Some(true);
        let r = certify_order_one(&d, &big(2), Exec::Sequential).unwrap();
        assert_eq!(r.entries[0].order, 0);
        assert!(r.entries[0].residue_sum.is_zero());
        assert!(r.entries[0].consistent);
        assert!(!r.verdict());
    }

    #[test]
    fn below_threshold_refused() {
        let d = symbolic(vec![line("W", true, 2, 0, 1), line("S", false, 1, 4, 0)]);
        assert!(matches!(
            certify_order_one(&d, &big(3), Exec::Sequential),
            Err(Error::Precondition(_))
        ));
    }
}
