use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{Chi, KValue, ResolutionDatum, SECTION_ID};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<String>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every schema invariant; never fails, only reports.
pub fn validate(datum: &ResolutionDatum) -> ValidationReport {
    let mut r = ValidationReport::default();
    let mut bad = |m: String| r.violations.push(m);

    if datum.ambient_dim == 0 {
        bad("ambient_dim must be positive".into());
    }
    let n = datum.ambient_dim as usize;

    let mut ids = BTreeSet::new();
    for d in &datum.divisors {
        if d.id.is_empty() {
            bad("divisor with empty id".into());
        }
        if !ids.insert(d.id.as_str()) {
            bad(format!("duplicate divisor id `{}`", d.id));
        }
        if d.n < BigInt::one() {
            bad(format!("divisor {}: discrepancy n must be >= 1, got {}", d.id, d.n));
        }
        if d.a.len() != datum.p {
            bad(format!(
                "divisor {}: expected {} multiplicities, got {}",
                d.id,
                datum.p,
                d.a.len()
            ));
        }
        if d.a.iter().any(|a| a.is_negative()) {
            bad(format!("divisor {}: negative multiplicity", d.id));
        }
        if let Some(b) = &d.b {
            if !d.exceptional {
                bad(format!("divisor {}: b given for a non-exceptional divisor", d.id));
            }
            if !b.is_positive() {
                bad(format!("divisor {}: b must be positive", d.id));
            }
        }
        if !d.exceptional && d.id != SECTION_ID && d.a.iter().all(Zero::is_zero) && datum.p > 0 {
            bad(format!(
                "divisor {}: non-exceptional divisor with zero multiplicity vector",
                d.id
            ));
        }
    }

    let known = |id: &str| ids.contains(id);
    let mut seen_sets = BTreeSet::new();
    let mut nonempty_members: BTreeSet<&str> = BTreeSet::new();
    for s in &datum.strata {
        let label = s.label();
        if s.divisors.is_empty() {
            bad("stratum with no divisors".into());
            continue;
        }
        let set: BTreeSet<&str> = s.divisors.iter().map(String::as_str).collect();
        if set.len() != s.divisors.len() {
            bad(format!("stratum {label}: repeated divisor"));
        }
        for id in &set {
            if !known(id) {
                bad(format!("stratum {label}: unknown divisor `{id}`"));
            }
        }
        if !seen_sets.insert(set.clone()) {
            bad(format!("stratum {label} listed twice"));
        }
        if set.len() > n {
            bad(format!(
                "stratum {label}: {} divisors exceed ambient dimension {n}",
                set.len()
            ));
        }
        if s.nonempty == Some(false) && s.chi.is_nonzero() {
            bad(format!("stratum {label}: nonzero chi on an empty stratum"));
        }
        if set.len() == n && s.is_nonempty() {
            if let Chi::Int(c) = &s.chi {
                if c < &BigInt::one() {
                    bad(format!(
                        "stratum {label}: nonempty finite stratum must have chi >= 1, got {c}"
                    ));
                }
            }
        }
        if s.is_nonempty() {
            nonempty_members.extend(set);
        }
    }

    let mut point_ids = BTreeSet::new();
    for x in &datum.points {
        if !point_ids.insert(x.id.as_str()) {
            bad(format!("duplicate point id `{}`", x.id));
        }
        let mut seen = BTreeSet::new();
        for e in &x.entries {
            if !known(&e.divisor) {
                bad(format!("point {}: unknown divisor `{}`", x.id, e.divisor));
                continue;
            }
            if !seen.insert(e.divisor.as_str()) {
                bad(format!("point {}: divisor `{}` listed twice", x.id, e.divisor));
            }
            if !nonempty_members.contains(e.divisor.as_str()) {
                bad(format!(
                    "point {}: divisor `{}` lies in no nonempty stratum",
                    x.id, e.divisor
                ));
            }
        }
    }

    let exceptional: BTreeSet<&str> = datum.exceptional_ids().into_iter().collect();
    if let Some(ample) = &datum.ample {
        if !ample.d.is_positive() {
            bad("ample: d must be positive".into());
        }
        let keys: BTreeSet<&str> = ample.b.keys().map(String::as_str).collect();
        if keys != exceptional {
            bad(format!(
                "ample: b keys {keys:?} must be exactly the exceptional divisors {exceptional:?}"
            ));
        }
        for (id, b) in &ample.b {
            if !b.is_positive() {
                bad(format!("ample: b[{id}] must be positive"));
            }
        }
        for d in &datum.divisors {
            if let (Some(b), Some(ab)) = (&d.b, ample.b.get(&d.id)) {
                if b != ab {
                    bad(format!("divisor {}: b={} disagrees with ample b={}", d.id, b, ab));
                }
            }
        }
    }

    for e in datum.degrees.iter().flatten() {
        for id in &e.divisors {
            if !known(id) {
                bad(format!("degrees: unknown divisor `{id}`"));
            }
        }
        if !e.deg.is_positive() {
            bad(format!("degrees {:?}: deg must be positive", e.divisors));
        }
        if e.dim as usize > n {
            bad(format!("degrees {:?}: dim exceeds ambient dimension", e.divisors));
        }
    }

    for [a, b] in datum.adjacent_pairs.iter().flatten() {
        if !known(a) || !known(b) {
            bad(format!("adjacent_pairs: unknown divisor in ({a}, {b})"));
        }
        if a == b {
            bad(format!("adjacent_pairs: ({a}, {b}) is not a pair"));
        }
    }

    if let Some(section) = &datum.section {
        if known(SECTION_ID) {
            bad(format!("section data present but `{SECTION_ID}` is already a divisor"));
        }
        for s in &section.strata {
            if !s.divisors.iter().any(|d| d == SECTION_ID) {
                bad(format!("section stratum {} does not contain {SECTION_ID}", s.label()));
            }
            for id in &s.divisors {
                if id != SECTION_ID && !known(id) {
                    bad(format!("section stratum {}: unknown divisor `{id}`", s.label()));
                }
            }
        }
    }

    if let Some(aug) = &datum.augmented {
        match datum.divisor(SECTION_ID) {
            Err(_) => bad(format!("augmented datum lacks the section divisor `{SECTION_ID}`")),
            Ok(h) => {
                if h.n != BigInt::one() || h.exceptional {
                    bad(format!("section divisor `{SECTION_ID}` must have n = 1 and be non-exceptional"));
                }
            }
        }
        for id in &exceptional {
            if datum.b_of(id).is_none() {
                bad(format!("augmented datum: exceptional divisor {id} has no b coordinate"));
            }
        }
        if let KValue::Numeric(k) = &aug.k {
            if !k.is_positive() {
                bad("augmented: k must be positive".into());
            }
            if datum.p == 0 {
                bad("augmented numeric datum must have the section column".into());
            } else {
                for d in &datum.divisors {
                    let expected = if d.exceptional {
                        datum.b_of(&d.id).map(|b| b * k)
                    } else if d.id == SECTION_ID {
                        Some(BigInt::one())
                    } else {
                        Some(BigInt::zero())
                    };
                    if let (Some(e), Some(last)) = (expected, d.a.last()) {
                        if &e != last {
                            bad(format!(
                                "divisor {}: section column is {last}, expected {e}",
                                d.id
                            ));
                        }
                    }
                }
            }
        }
    }

    let mut warn = |m: &str| r.warnings.push(m.to_string());
    if datum.points.is_empty() {
        warn("no local fibre points: monodromy support is unavailable");
    }
    if datum.ample.is_none() {
        warn("no ample block: genericity checks are unavailable");
    }
    if datum.degrees.is_none() {
        warn("no degree data: leading-term augmentation is unavailable");
    }
    if datum.tuple_len() == 0 {
        warn("no multiplicity columns: zeta functions need augmentation first");
    }
    r
}
