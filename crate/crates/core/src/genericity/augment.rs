use std::collections::BTreeMap;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::algebra::rational::from_big;
use crate::algebra::PolyInK;
use crate::asymptotics::{leading_chi_ambient, leading_chi_complement, leading_chi_section};
use crate::error::{Error, Result};
use crate::model::{
    Augmentation, Chi, DegreeEntry, Divisor, FiberEntry, KValue, LocalFiberDatum, ResolutionDatum,
    Stratum, SECTION_ID,
};

/// Where the Euler characteristics of strata meeting `H` came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChiSource {
    /// Exact values from the datum's `section` block.
    Section,
    /// Leading terms derived from degree data; exact only in dimension 0.
    LeadingTerms,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugmentedDatum {
    pub datum: ResolutionDatum,
    pub k: KValue,
    pub chi_source: ChiSource,
}

fn chi_as_poly(chi: &Chi, ctx: &str) -> Result<PolyInK> {
    match chi {
        Chi::Int(v) => Ok(PolyInK::constant(from_big(v))),
        Chi::Poly(p) => Ok(p.clone()),
        Chi::Leading(_) => Err(Error::LeadingOnlyChi(ctx.to_string())),
    }
}

/// Stores a polynomial `chi` as an integer when `k` is numeric or the
/// polynomial is constant.
fn settle(p: PolyInK, k: &KValue, ctx: &str) -> Result<Chi> {
    let c = Chi::Poly(p);
    match k {
        KValue::Numeric(k) => Ok(Chi::Int(c.value_at(Some(k), ctx)?)),
        KValue::Symbolic => match c.value_at(None, ctx) {
            Ok(v) => Ok(Chi::Int(v)),
            Err(_) => Ok(c),
        },
    }
}

fn key(ids: &[String]) -> BTreeSet<String> {
    ids.iter().cloned().collect()
}

/// Adds a generic section `H` of `L^k` as an extra divisor and column.
///
/// Strata meeting `H` come from the `section` block when present and are
/// otherwise derived from degree data as leading terms in `k`.
pub fn augment(datum: &ResolutionDatum, k: &KValue) -> Result<AugmentedDatum> {
    if datum.augmented.is_some() {
        return Err(Error::Precondition("datum is already augmented".into()));
    }
    if datum.divisor(SECTION_ID).is_ok() {
        return Err(Error::Precondition(format!(
            "divisor id `{SECTION_ID}` is reserved for the section"
        )));
    }
    if let KValue::Numeric(k) = k {
        if !k.is_positive() {
            return Err(Error::Precondition(format!("k must be positive, got {k}")));
        }
    }
    let mut divisors = Vec::with_capacity(datum.divisors.len() + 1);
    for d in &datum.divisors {
        let mut nd = d.clone();
        if let KValue::Numeric(k) = k {
            let extra = if d.exceptional {
                datum.b_of(&d.id).ok_or_else(|| {
                    Error::MissingAmple(format!("no b coordinate for exceptional divisor {}", d.id))
                })? * k
            } else {
                BigInt::zero()
            };
            nd.a.push(extra);
        } else if d.exceptional && datum.b_of(&d.id).is_none() {
            return Err(Error::MissingAmple(format!(
                "no b coordinate for exceptional divisor {}",
                d.id
            )));
        }
        divisors.push(nd);
    }
    let mut h_a = vec![BigInt::zero(); datum.p];
    if matches!(k, KValue::Numeric(_)) {
        h_a.push(1.into());
    }
    divisors.push(Divisor {
        id: SECTION_ID.to_string(),
        exceptional: false,
        n: 1.into(),
        a: h_a,
        b: None,
    });

    let (strata, points, chi_source) = match &datum.section {
        Some(section) => {
            let (s, p) = strata_from_section(datum, k)?;
            let points = match &section.points {
                Some(_) => p,
                None => default_points(),
            };
            (s, points, ChiSource::Section)
        }
        None => (strata_from_degrees(datum)?, default_points(), ChiSource::LeadingTerms),
    };

    let out = ResolutionDatum {
        ambient_dim: datum.ambient_dim,
        p: datum.p + usize::from(matches!(k, KValue::Numeric(_))),
        divisors,
        strata,
        points,
        ample: datum.ample.clone(),
        degrees: datum.degrees.clone(),
        adjacent_pairs: datum.adjacent_pairs.clone(),
        section: None,
        augmented: Some(Augmentation { k: k.clone() }),
    };
    Ok(AugmentedDatum {
        datum: out,
        k: k.clone(),
        chi_source,
    })
}

fn default_points() -> Vec<LocalFiberDatum> {
    vec![LocalFiberDatum {
        id: "H-general".into(),
        entries: vec![FiberEntry {
            divisor: SECTION_ID.into(),
            chi: Chi::int(1),
        }],
    }]
}

fn strata_from_section(
    datum: &ResolutionDatum,
    k: &KValue,
) -> Result<(Vec<Stratum>, Vec<LocalFiberDatum>)> {
    let section = datum.section.as_ref().expect("caller checked");
    let mut meets: BTreeMap<BTreeSet<String>, &Stratum> = BTreeMap::new();
    for s in &section.strata {
        let mut set = key(&s.divisors);
        if !set.remove(SECTION_ID) {
            return Err(Error::Invalid(format!(
                "section stratum {} does not contain {SECTION_ID}",
                s.label()
            )));
        }
        meets.insert(set, s);
    }
    let mut strata = Vec::new();
    for s in &datum.strata {
        let ctx = s.label();
        let mut p = chi_as_poly(&s.chi, &ctx)?;
        if let Some(hs) = meets.get(&key(&s.divisors)) {
            p = &p - &chi_as_poly(&hs.chi, &hs.label())?;
        }
        strata.push(Stratum {
            divisors: s.divisors.clone(),
            chi: settle(p, k, &ctx)?,
            nonempty: s.nonempty,
        });
    }
    for s in &section.strata {
        strata.push(Stratum {
            divisors: s.divisors.clone(),
            chi: settle(chi_as_poly(&s.chi, &s.label())?, k, &s.label())?,
            nonempty: s.nonempty,
        });
    }
    let mut points = Vec::new();
    for x in section.points.iter().flatten() {
        let entries = x
            .entries
            .iter()
            .map(|e| {
                let ctx = format!("point {}", x.id);
                Ok(FiberEntry {
                    divisor: e.divisor.clone(),
                    chi: settle(chi_as_poly(&e.chi, &ctx)?, k, &ctx)?,
                })
            })
            .collect::<Result<_>>()?;
        points.push(LocalFiberDatum {
            id: x.id.clone(),
            entries,
        });
    }
    Ok((strata, points))
}

fn strata_from_degrees(datum: &ResolutionDatum) -> Result<Vec<Stratum>> {
    let degrees = datum.degrees.as_ref().ok_or_else(|| {
        Error::Precondition(
            "augmentation needs either a `section` block or `degrees` for leading terms".into(),
        )
    })?;
    let lookup: BTreeMap<BTreeSet<String>, &DegreeEntry> =
        degrees.iter().map(|e| (key(&e.divisors), e)).collect();
    let n = datum.ambient_dim;
    let mut strata = Vec::new();
    let mut meeting = Vec::new();
    for s in &datum.strata {
        let e = lookup.get(&key(&s.divisors)).ok_or_else(|| {
            Error::Precondition(format!("no degree entry for stratum {}", s.label()))
        })?;
        let chi = if e.dim == 0 {
            s.chi.clone()
        } else {
            Chi::Leading(leading_chi_complement(e.dim, &e.deg)?)
        };
        strata.push(Stratum {
            divisors: s.divisors.clone(),
            chi,
            nonempty: s.nonempty,
        });
        if e.dim > 0 && s.is_nonempty() {
            let mut ids = s.divisors.clone();
            ids.push(SECTION_ID.into());
            meeting.push(Stratum {
                divisors: ids,
                chi: Chi::Leading(leading_chi_section(e.dim, &e.deg)?),
                nonempty: None,
            });
        }
    }
    let ambient = lookup.get(&BTreeSet::new()).ok_or_else(|| {
        Error::Precondition("no degree entry for the ambient space (empty divisor list)".into())
    })?;
    if ambient.dim != n {
        return Err(Error::Invalid(format!(
            "ambient degree entry has dim {}, expected {n}",
            ambient.dim
        )));
    }
    strata.push(Stratum {
        divisors: vec![SECTION_ID.into()],
        chi: Chi::Leading(leading_chi_ambient(n, &ambient.deg)?),
        nonempty: None,
    });
    strata.extend(meeting);
    Ok(strata)
}
