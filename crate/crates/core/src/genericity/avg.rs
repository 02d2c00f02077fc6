use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::algebra::Rational;
use crate::error::{Error, Result};
use crate::model::{AmpleVector, ResolutionDatum};

/// A pair `(W, W')` with `n_W * b_W' / b_W` integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AvgViolation {
    pub w: String,
    pub w_prime: String,
    pub value: BigInt,
    /// `n_W*b_W'=m*b_W` in readable form.
    pub relation: String,
}

/// Non-integral ratios that were checked, kept as witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AvgWitness {
    pub w: String,
    pub w_prime: String,
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AvgReport {
    pub violations: Vec<AvgViolation>,
    pub witnesses: Vec<AvgWitness>,
}

impl AvgReport {
    pub fn verdict(&self) -> bool {
        self.violations.is_empty()
    }
}

fn b_coordinate(ample: &AmpleVector, id: &str) -> Result<BigInt> {
    let b = ample
        .b
        .get(id)
        .cloned()
        .ok_or_else(|| Error::MissingAmple(format!("no b coordinate for exceptional divisor {id}")))?;
    if !b.is_positive() {
        return Err(Error::MissingAmple(format!("b coordinate of {id} must be positive")));
    }
    Ok(b)
}

/// Tests `n_W * b_W' / b_W` for every exceptional `W` and adjacent
/// exceptional `W'`.
pub fn check_avg(datum: &ResolutionDatum, ample: &AmpleVector) -> Result<AvgReport> {
    let exc = datum.exceptional_ids();
    let bs: BTreeMap<&str, BigInt> = exc
        .iter()
        .map(|id| Ok((*id, b_coordinate(ample, id)?)))
        .collect::<Result<_>>()?;
    let mut report = AvgReport {
        violations: Vec::new(),
        witnesses: Vec::new(),
    };
    for w in &exc {
        let n_w = &datum.divisor(w)?.n;
        let b_w = &bs[w];
        for w2 in datum.neighbours(w) {
            let Some(b_w2) = bs.get(w2.as_str()) else {
                continue;
            };
            let value = Rational::new(n_w * b_w2, b_w.clone());
            if value.is_integer() {
                let m = value.to_integer();
                report.violations.push(AvgViolation {
                    w: w.to_string(),
                    w_prime: w2.clone(),
                    relation: format!("{n_w}*b_{w2}={m}*b_{w}"),
                    value: m,
                });
            } else {
                report.witnesses.push(AvgWitness {
                    w: w.to_string(),
                    w_prime: w2,
                    value,
                });
            }
        }
    }
    Ok(report)
}

/// The first `count` primes strictly greater than `bound`.
pub fn primes_above(bound: &BigInt, count: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(count);
    let mut c = bound + 1;
    while out.len() < count {
        if is_prime(&c) {
            out.push(c.clone());
        }
        c += 1;
    }
    out
}

fn is_prime(n: &BigInt) -> bool {
    let two = BigInt::from(2);
    if n < &two {
        return false;
    }
    let mut d = two;
    while &d * &d <= *n {
        if (n % &d) == BigInt::from(0) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MadeAvg {
    pub ample: AmpleVector,
    /// `p_W` per exceptional divisor.
    pub primes: BTreeMap<String, BigInt>,
    pub p: BigInt,
}

/// Replaces `L` by `p(L - sum W/p_W)` with `p_W` the smallest distinct
/// primes above every `n_W`, i.e. `b_W -> p*b_W + p/p_W` and `d -> p*d`.
pub fn make_avg(datum: &ResolutionDatum, ample: &AmpleVector) -> Result<MadeAvg> {
    let exc = datum.exceptional_ids();
    let mut max_n = BigInt::one();
    for w in &exc {
        b_coordinate(ample, w)?;
        let n = &datum.divisor(w)?.n;
        if n > &max_n {
            max_n = n.clone();
        }
    }
    let primes: BTreeMap<String, BigInt> = exc
        .iter()
        .map(|w| w.to_string())
        .zip(primes_above(&max_n, exc.len()))
        .collect();
    let p: BigInt = primes.values().product();
    let b = primes
        .iter()
        .map(|(w, pw)| (w.clone(), &p * &ample.b[w] + &p / pw))
        .collect();
    Ok(MadeAvg {
        ample: AmpleVector {
            d: &p * &ample.d,
            b,
        },
        primes,
        p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets;

    fn big(v: i64) -> BigInt {
        v.into()
    }

    #[test]
    fn chain_examples() {
        let bad = datasets::sixone_with(2, 3, 4);
        let r = check_avg(&bad, bad.ample.as_ref().unwrap()).unwrap();
        assert!(!r.verdict());
        assert!(r.violations.iter().any(|v| v.relation == "3*b_W1=2*b_W2"));
        let good = datasets::sixone();
        assert!(check_avg(&good, good.ample.as_ref().unwrap()).unwrap().verdict());
    }

    #[test]
    fn make_avg_on_the_chain() {
        let d = datasets::sixone_with(2, 3, 4);
        let m = make_avg(&d, d.ample.as_ref().unwrap()).unwrap();
        assert_eq!(m.p, big(35));
        assert_eq!(m.ample.b["W1"], big(77));
        assert_eq!(m.ample.b["W2"], big(110));
        assert_eq!(m.ample.d, big(140));
        assert!(check_avg(&d, &m.ample).unwrap().verdict());
    }

    #[test]
    fn missing_coordinate() {
        let d = datasets::sixone();
        let mut a = d.ample.clone().unwrap();
        a.b.remove("W2");
        assert!(matches!(check_avg(&d, &a), Err(Error::MissingAmple(_))));
    }

    #[test]
    fn no_exceptional_neighbour_is_vacuous() {
        let mut d = datasets::sixone();
        d.strata.retain(|s| s.divisors.len() == 1);
        let r = check_avg(&d, d.ample.as_ref().unwrap()).unwrap();
        assert!(r.verdict() && r.witnesses.is_empty());
    }

    #[test]
    fn primes() {
        assert_eq!(primes_above(&big(3), 3), vec![big(5), big(7), big(11)]);
        assert_eq!(primes_above(&big(1), 2), vec![big(2), big(3)]);
    }
}
