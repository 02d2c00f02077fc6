use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::algebra::rational::from_big;
use crate::algebra::{LinearForm, Rational};
use crate::error::{Error, Result};
use crate::model::ResolutionDatum;

/// A vector `l` of positive integers of length `p + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FrakLVector(Vec<BigInt>);

impl FrakLVector {
    pub fn new(l: Vec<BigInt>) -> Result<Self> {
        if l.is_empty() || l.iter().any(|x| !x.is_positive()) {
            return Err(Error::Precondition(
                "l must be a nonempty vector of positive integers".into(),
            ));
        }
        Ok(FrakLVector(l))
    }

    pub fn from_i64(l: &[i64]) -> Result<Self> {
        Self::new(l.iter().map(|&x| x.into()).collect())
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dot(&self, a: &[BigInt]) -> BigInt {
        self.0.iter().zip(a).map(|(x, y)| x * y).sum()
    }
}

fn numeric_vector(aug: &ResolutionDatum, id: &str, len: usize) -> Result<Vec<BigInt>> {
    if aug.numeric_k().is_none() {
        return Err(Error::Precondition(
            "needs a datum augmented at a numeric k".into(),
        ));
    }
    let a = aug.multiplicities(id)?;
    if a.len() != len {
        return Err(Error::VariableMismatch(len, a.len()));
    }
    Ok(a)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrakLCheck {
    pub w_prime: String,
    pub value: Rational,
    pub integral: bool,
}

/// Evaluates `n_W (l . a_W') / (l . a_W)` for every divisor adjacent to `W`.
pub fn frak_l_checks(aug: &ResolutionDatum, w: &str, l: &FrakLVector) -> Result<Vec<FrakLCheck>> {
    let d = aug.divisor(w)?;
    if !d.exceptional {
        return Err(Error::Precondition(format!("{w} is not exceptional")));
    }
    let a_w = numeric_vector(aug, w, l.len())?;
    let den = l.dot(&a_w);
    if den.is_zero() {
        return Err(Error::ZeroDenominator(format!("l . a_{w} = 0")));
    }
    aug.neighbours(w)
        .into_iter()
        .map(|w2| {
            let a2 = numeric_vector(aug, &w2, l.len())?;
            let value = Rational::new(&d.n * l.dot(&a2), den.clone());
            Ok(FrakLCheck {
                integral: value.is_integer(),
                w_prime: w2,
                value,
            })
        })
        .collect()
}

pub fn frak_l_membership(aug: &ResolutionDatum, w: &str, l: &FrakLVector) -> Result<bool> {
    Ok(frak_l_checks(aug, w, l)?.iter().all(|c| !c.integral))
}

/// `l * r` with `r = -n / (l . a)`.
pub fn q_point_raw(a: &[BigInt], n: &BigInt, l: &FrakLVector) -> Result<Vec<Rational>> {
    if a.len() != l.len() {
        return Err(Error::VariableMismatch(l.len(), a.len()));
    }
    let den = l.dot(a);
    if den.is_zero() {
        return Err(Error::ZeroDenominator("l . a = 0".into()));
    }
    let r = Rational::new(-n.clone(), den);
    Ok(l.entries().iter().map(|x| from_big(x) * &r).collect())
}

pub fn q_point(w: &str, l: &FrakLVector, aug: &ResolutionDatum) -> Result<Vec<Rational>> {
    let a = numeric_vector(aug, w, l.len())?;
    q_point_raw(&a, &aug.divisor(w)?.n, l)
}

/// The line through `(0,...,0,-n/c)` carrying every `q_{W,(l', t)}`,
/// `t >= 1`: returns `(base point, direction)`.
pub fn lemma_line(a: &[BigInt], n: &BigInt, l_prime: &[BigInt]) -> Result<(Vec<Rational>, Vec<Rational>)> {
    let Some((c, a_prime)) = a.split_last() else {
        return Err(Error::Precondition("empty multiplicity vector".into()));
    };
    if a_prime.len() != l_prime.len() {
        return Err(Error::VariableMismatch(a_prime.len(), l_prime.len()));
    }
    if c.is_zero() {
        return Err(Error::ZeroDenominator("last multiplicity is zero".into()));
    }
    let big_a: BigInt = l_prime.iter().zip(a_prime).map(|(x, y)| x * y).sum();
    let mut base = vec![Rational::zero(); a.len()];
    base[a.len() - 1] = Rational::new(-n.clone(), c.clone());
    let mut dir: Vec<Rational> = l_prime.iter().map(|x| -from_big(x)).collect();
    dir.push(Rational::new(big_a, c.clone()));
    Ok((base, dir))
}

/// Whether `x` lies on `base + R * dir`.
pub fn on_line(x: &[Rational], base: &[Rational], dir: &[Rational]) -> bool {
    let diff: Vec<Rational> = x.iter().zip(base).map(|(a, b)| a - b).collect();
    let Some(i) = dir.iter().position(|d| !d.is_zero()) else {
        return diff.iter().all(Zero::is_zero);
    };
    let mu = &diff[i] / &dir[i];
    diff.iter().zip(dir).all(|(d, v)| *d == &mu * v)
}

/// Affine hyperplanes in `C^q`, deduplicated up to proportionality.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HyperplaneSet {
    forms: BTreeSet<LinearForm>,
}

impl HyperplaneSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, form: &LinearForm) -> Result<bool> {
        if form.coefficient_gcd().is_zero() {
            return Err(Error::ConstantForm(form.to_string()));
        }
        Ok(self.forms.insert(form.primitive().1))
    }

    pub fn from_forms<'a>(forms: impl IntoIterator<Item = &'a LinearForm>) -> Result<Self> {
        let mut s = Self::new();
        for f in forms {
            s.insert(f)?;
        }
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &LinearForm> {
        self.forms.iter()
    }

    pub fn contains(&self, form: &LinearForm) -> bool {
        self.forms.contains(&form.primitive().1)
    }
}

impl fmt::Display for HyperplaneSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.forms.iter().map(|h| format!("{{{h}=0}}")).collect();
        f.write_str(&parts.join(", "))
    }
}

/// `t_{q}^{l_q} ... t_{i+1}^{l_{i+1}} t_i^j` applied to `{a.s + n = 0}`, where
/// `t_i` subtracts one from coordinate `i`: the result is
/// `{a.s + n + j a_i + sum_{m>i} l_m a_m = 0}`.
pub fn translate(form: &LinearForm, l: &FrakLVector, slot: usize, j: &BigInt) -> LinearForm {
    let a = form.coeffs();
    let mut shift = j * &a[slot];
    for (lm, am) in l.entries().iter().zip(a).skip(slot + 1) {
        shift += lm * am;
    }
    LinearForm::new(a.to_vec(), form.constant() + shift)
}

/// The union over slots `i` and `0 <= j < l_i` of the translates above.
pub fn bs_translates(base: &HyperplaneSet, l: &FrakLVector) -> Result<HyperplaneSet> {
    let mut out = HyperplaneSet::new();
    for h in base.iter() {
        if h.nvars() != l.len() {
            return Err(Error::VariableMismatch(l.len(), h.nvars()));
        }
        for (i, li) in l.entries().iter().enumerate() {
            let mut j = BigInt::zero();
            while &j < li {
                out.insert(&translate(h, l, i, &j))?;
                j += 1;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};
    use crate::datasets;
    use crate::genericity::augment;
    use crate::model::KValue;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn q_points() {
        let l = FrakLVector::from_i64(&[1, 1]).unwrap();
        let q = q_point_raw(&big(&[2, 3]), &5.into(), &l).unwrap();
        assert_eq!(q, vec![int(-1), int(-1)]);
        let l = FrakLVector::from_i64(&[1, 2]).unwrap();
        let q = q_point_raw(&big(&[2, 3]), &5.into(), &l).unwrap();
        assert_eq!(q, vec![rat(-5, 8), rat(-10, 8)]);
        assert_eq!(LinearForm::from_i64(&[2, 3], 5).eval(&q), int(0));
        assert!(FrakLVector::from_i64(&[1, 0]).is_err());
    }

    #[test]
    fn chain_membership() {
        let aug = augment(&datasets::sixone(), &KValue::Numeric(10.into())).unwrap().datum;
        for t in [1, 1000, 1_000_000] {
            let l = FrakLVector::from_i64(&[t]).unwrap();
            assert!(frak_l_membership(&aug, "W1", &l).unwrap());
        }
        let l = FrakLVector::from_i64(&[1, 1]).unwrap();
        assert!(frak_l_membership(&aug, "W1", &l).is_err());
    }

    #[test]
    fn integral_ratio_fails_membership() {
        // W: n=2, a=(1, kb=3); neighbour V: a=(5, 0). With l=(1,1):
        // 2*5/4 not integral; with l=(3,1): 2*15/6 = 5 integral.
        use crate::model::{Augmentation, Chi, Divisor, Stratum};
        let d = ResolutionDatum {
            ambient_dim: 2,
            p: 2,
            divisors: vec![
                Divisor { id: "W".into(), exceptional: true, n: 2.into(), a: big(&[1, 3]), b: Some(3.into()) },
                Divisor { id: "V".into(), exceptional: false, n: 1.into(), a: big(&[5, 0]), b: None },
                Divisor { id: "H".into(), exceptional: false, n: 1.into(), a: big(&[0, 1]), b: None },
            ],
            strata: vec![Stratum::new(&["W", "V"], Chi::int(1))],
            points: vec![],
            ample: None,
            degrees: None,
            adjacent_pairs: None,
            section: None,
            augmented: Some(Augmentation { k: KValue::Numeric(1.into()) }),
        };
        assert!(frak_l_membership(&d, "W", &FrakLVector::from_i64(&[1, 1]).unwrap()).unwrap());
        assert!(!frak_l_membership(&d, "W", &FrakLVector::from_i64(&[3, 1]).unwrap()).unwrap());
    }

    #[test]
    fn translates_small() {
        let base = HyperplaneSet::from_forms([&LinearForm::from_i64(&[1, 1], 1)]).unwrap();
        let l = FrakLVector::from_i64(&[2, 1]).unwrap();
        let t = bs_translates(&base, &l).unwrap();
        // slot 0: j=0,1 with l_2*a_2 = 1 -> constants 2, 3; slot 1: j=0 -> 1
        let consts: Vec<_> = t.iter().map(|f| f.constant().clone()).collect();
        assert_eq!(consts, big(&[1, 2, 3]));
        let ones = FrakLVector::from_i64(&[1, 1]).unwrap();
        assert_eq!(bs_translates(&base, &ones).unwrap().len(), 2);
        assert!(bs_translates(&HyperplaneSet::new(), &l).unwrap().is_empty());
    }

    #[test]
    fn lemma_line_holds() {
        let a = big(&[2, 1, 6]);
        let n = BigInt::from(5);
        let lp = big(&[3, 2]);
        let (base, dir) = lemma_line(&a, &n, &lp).unwrap();
        assert_eq!(base, vec![int(0), int(0), rat(-5, 6)]);
        for t in 1..30 {
            let mut l = lp.clone();
            l.push(t.into());
            let q = q_point_raw(&a, &n, &FrakLVector::new(l).unwrap()).unwrap();
            assert!(on_line(&q, &base, &dir));
        }
    }
}
