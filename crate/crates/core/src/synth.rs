//! Seeded random data for property tests, acceptance runs and benchmarks.
//!
//! Every generator returns data that passes validation.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::Rational;
use crate::model::{
    AmpleVector, Augmentation, Chi, Divisor, FiberEntry, KValue, LocalFiberDatum, ResolutionDatum,
    Stratum,
};
use crate::monodromy::MonodromyZetaFactors;

fn big(v: i64) -> BigInt {
    v.into()
}

fn nonzero_vector<R: Rng>(rng: &mut R, len: usize, max: i64) -> Vec<BigInt> {
    loop {
        let v: Vec<i64> = (0..len).map(|_| rng.gen_range(0..=max)).collect();
        if v.iter().any(|&x| x != 0) {
            return v.into_iter().map(big).collect();
        }
    }
}

fn stratum(ids: &[&String], chi: i64) -> Stratum {
    Stratum {
        divisors: ids.iter().map(|s| s.to_string()).collect(),
        chi: Chi::int(chi),
        nonempty: (chi == 0).then_some(true),
    }
}

/// A datum in ambient dimension 3 with `ndiv` divisors, `p` columns of
/// multiplicities in `0..=4`, random strata of size at most 3 and a few
/// points.
pub fn random_datum<R: Rng>(rng: &mut R, p: usize, ndiv: usize) -> ResolutionDatum {
    let ndiv = ndiv.max(1);
    let ids: Vec<String> = (0..ndiv).map(|i| format!("D{i}")).collect();
    let divisors = ids
        .iter()
        .map(|id| Divisor {
            id: id.clone(),
            exceptional: rng.gen_bool(0.5),
            n: big(rng.gen_range(1..=6)),
            a: nonzero_vector(rng, p, 4),
            b: None,
        })
        .collect();
    let mut strata: Vec<Stratum> = ids.iter().map(|id| stratum(&[id], rng.gen_range(-3..=3))).collect();
    let mut seen = BTreeSet::new();
    for _ in 0..ndiv * 2 {
        let size = rng.gen_range(2..=3.min(ndiv.max(2)));
        if size > ndiv {
            break;
        }
        let mut pick: Vec<&String> = ids.choose_multiple(rng, size).collect();
        pick.sort();
        if !seen.insert(pick.clone()) {
            continue;
        }
        let chi = if size == 3 { rng.gen_range(1..=3) } else { rng.gen_range(-2..=3) };
        strata.push(stratum(&pick, chi));
    }
    let points = (0..rng.gen_range(1..=3))
        .map(|i| {
            let k = rng.gen_range(1..=ndiv.min(4));
            let mut entries: Vec<&String> = ids.choose_multiple(rng, k).collect();
            entries.sort();
            LocalFiberDatum {
                id: format!("x{i}"),
                entries: entries
                    .into_iter()
                    .map(|id| FiberEntry {
                        divisor: id.clone(),
                        chi: Chi::int(rng.gen_range(-2..=2)),
                    })
                    .collect(),
            }
        })
        .collect();
    ResolutionDatum {
        ambient_dim: 3,
        p,
        divisors,
        strata,
        points,
        ample: None,
        degrees: None,
        adjacent_pairs: None,
        section: None,
        augmented: None,
    }
}

/// `nfactors` factors with exponent vectors in `0..=max_exp` (nonzero) and
/// exponents in `-3..=3`.
pub fn random_factor_map<R: Rng>(rng: &mut R, q: usize, max_exp: i64, nfactors: usize) -> MonodromyZetaFactors {
    let mut z = MonodromyZetaFactors::new(q);
    for _ in 0..nfactors {
        let a = nonzero_vector(rng, q, max_exp);
        let e = loop {
            let e = rng.gen_range(-3..=3);
            if e != 0 {
                break e;
            }
        };
        z.push(a, big(e)).expect("valid factor");
    }
    z
}

/// Up to `max_exc` exceptional curves (with `f = 1`) with `n_W, b_W` in
/// `1..=max_val`, joined in a chain plus random extra adjacencies.
pub fn random_avg_config<R: Rng>(rng: &mut R, max_exc: usize, max_val: i64) -> (ResolutionDatum, AmpleVector) {
    let m = rng.gen_range(1..=max_exc.max(1));
    let ids: Vec<String> = (0..m).map(|i| format!("W{}", i + 1)).collect();
    let divisors = ids
        .iter()
        .map(|id| Divisor {
            id: id.clone(),
            exceptional: true,
            n: big(rng.gen_range(1..=max_val)),
            a: vec![],
            b: None,
        })
        .collect();
    let mut strata: Vec<Stratum> = ids.iter().map(|id| stratum(&[id], 1)).collect();
    let mut pairs = BTreeSet::new();
    for i in 1..m {
        pairs.insert((i - 1, i));
    }
    for _ in 0..m {
        let (i, j) = (rng.gen_range(0..m), rng.gen_range(0..m));
        if i < j {
            pairs.insert((i, j));
        }
    }
    for (i, j) in pairs {
        strata.push(stratum(&[&ids[i], &ids[j]], 1));
    }
    let b: BTreeMap<String, BigInt> = ids
        .iter()
        .map(|id| (id.clone(), big(rng.gen_range(1..=max_val))))
        .collect();
    let ample = AmpleVector {
        d: big(rng.gen_range(1..=max_val)),
        b,
    };
    let datum = ResolutionDatum {
        ambient_dim: 2,
        p: 0,
        divisors,
        strata,
        points: vec![],
        ample: Some(ample.clone()),
        degrees: None,
        adjacent_pairs: None,
        section: None,
        augmented: None,
    };
    (datum, ample)
}

/// A symbolic augmented datum with one base column: 1 to 4 exceptional
/// curves, 1 to 3 strict transforms with pairwise distinct pole locations
/// (none at `-1`, which belongs to `H`), and `H`.
pub fn random_symbolic_augmented<R: Rng>(rng: &mut R) -> ResolutionDatum {
    let m = rng.gen_range(1..=4);
    let s = rng.gen_range(1..=3);
    let mut divisors = Vec::new();
    let mut b = BTreeMap::new();
    for i in 0..m {
        let id = format!("E{}", i + 1);
        b.insert(id.clone(), big(rng.gen_range(1..=6)));
        divisors.push(Divisor {
            id,
            exceptional: true,
            n: big(rng.gen_range(1..=8)),
            a: vec![big(rng.gen_range(0..=6))],
            b: None,
        });
    }
    let mut used: BTreeSet<Rational> = BTreeSet::from([Rational::from_integer(big(1))]);
    let mut i = 0;
    while i < s {
        let n = rng.gen_range(1..=4);
        let a = rng.gen_range(1..=8);
        if used.insert(Rational::new(big(n), big(a))) {
            i += 1;
            divisors.push(Divisor {
                id: format!("S{i}"),
                exceptional: false,
                n: big(n),
                a: vec![big(a)],
                b: None,
            });
        }
    }
    divisors.push(Divisor {
        id: "H".into(),
        exceptional: false,
        n: big(1),
        a: vec![big(0)],
        b: None,
    });
    let ids: Vec<String> = divisors.iter().map(|d| d.id.clone()).collect();
    let mut strata: Vec<Stratum> = ids.iter().map(|id| stratum(&[id], 1)).collect();
    for w in ids.windows(2) {
        strata.push(stratum(&[&w[0], &w[1]], 1));
    }
    let ample = AmpleVector { d: big(rng.gen_range(1..=10)), b };
    ResolutionDatum {
        ambient_dim: 2,
        p: 1,
        divisors,
        strata,
        points: vec![],
        ample: Some(ample),
        degrees: None,
        adjacent_pairs: None,
        section: None,
        augmented: Some(Augmentation { k: KValue::Symbolic }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn generated_data_validate() {
        let mut rng = StdRng::seed_from_u64(7);
        for i in 0..50 {
            let d = random_datum(&mut rng, 1 + i % 3, 1 + i % 7);
            let r = validate(&d);
            assert!(r.is_valid(), "{:?}", r.violations);
            let (d, _) = random_avg_config(&mut rng, 6, 50);
            assert!(validate(&d).is_valid());
            let d = random_symbolic_augmented(&mut rng);
            assert!(validate(&d).is_valid(), "{:?}", validate(&d).violations);
        }
    }
}
