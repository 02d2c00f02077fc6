//! Combinatorial data of a log resolution: divisors with their numerical
//! data, Euler characteristics of the open strata, local fibre data at
//! chosen points, and optional ample/degree data.

mod validate;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::rational::{from_big, int_map_serde, int_opt_serde, int_serde, int_vec_serde};
use crate::algebra::PolyInK;
use crate::asymptotics::LeadingTerm;
use crate::error::{Error, Result};

pub use validate::{validate, ValidationReport};

/// Id reserved for the generic section added by augmentation.
pub const SECTION_ID: &str = "H";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Divisor {
    pub id: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub exceptional: bool,
    /// Discrepancy `ord(K) + 1`.
    #[serde(with = "int_serde")]
    pub n: BigInt,
    /// Orders of vanishing of `f_1..f_p`.
    #[serde(with = "int_vec_serde")]
    pub a: Vec<BigInt>,
    #[serde(default, with = "int_opt_serde", skip_serializing_if = "Option::is_none")]
    pub b: Option<BigInt>,
}

/// An Euler characteristic: exact integer, exact polynomial in `k`, or only
/// its leading term in `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Chi {
    #[serde(rename = "chi", with = "int_serde")]
    Int(BigInt),
    #[serde(rename = "chi_poly")]
    Poly(PolyInK),
    #[serde(rename = "chi_leading")]
    Leading(LeadingTerm),
}

impl Chi {
    pub fn int(v: i64) -> Self {
        Chi::Int(BigInt::from(v))
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Chi::Int(v) => Some(v),
            _ => None,
        }
    }

    /// Known to be nonzero (leading terms are nonzero by construction).
    pub fn is_nonzero(&self) -> bool {
        match self {
            Chi::Int(v) => !v.is_zero(),
            Chi::Poly(p) => !p.is_zero(),
            Chi::Leading(_) => true,
        }
    }

    /// Exact integer value at `k`; `context` names the owner in errors.
    pub fn value_at(&self, k: Option<&BigInt>, context: &str) -> Result<BigInt> {
        match (self, k) {
            (Chi::Int(v), _) => Ok(v.clone()),
            (Chi::Poly(p), Some(k)) => {
                let v = p.eval(&from_big(k));
                if !v.is_integer() {
                    return Err(Error::Invalid(format!(
                        "{context}: Euler characteristic {p} is not an integer at k={k}"
                    )));
                }
                Ok(v.to_integer())
            }
            (Chi::Poly(p), None) => match p.as_constant() {
                Some(c) if c.is_integer() => Ok(c.to_integer()),
                _ => Err(Error::SymbolicChi(context.to_string())),
            },
            (Chi::Leading(_), _) => Err(Error::LeadingOnlyChi(context.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    pub divisors: Vec<String>,
    #[serde(flatten)]
    pub chi: Chi,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nonempty: Option<bool>,
}

impl Stratum {
    pub fn new(divisors: &[&str], chi: Chi) -> Self {
        Stratum {
            divisors: divisors.iter().map(|s| s.to_string()).collect(),
            chi,
            nonempty: None,
        }
    }

    pub fn is_nonempty(&self) -> bool {
        self.nonempty.unwrap_or_else(|| self.chi.is_nonzero())
    }

    pub fn label(&self) -> String {
        format!("{{{}}}", self.divisors.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberEntry {
    pub divisor: String,
    #[serde(flatten)]
    pub chi: Chi,
}

/// Euler characteristics of `W° ∩ μ^{-1}(x)` at one chosen point `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalFiberDatum {
    pub id: String,
    pub entries: Vec<FiberEntry>,
}

/// Coordinates `(d, b_W)` of a line bundle in the blow-up basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmpleVector {
    #[serde(with = "int_serde")]
    pub d: BigInt,
    #[serde(with = "int_map_serde")]
    pub b: BTreeMap<String, BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegreeEntry {
    /// Divisors whose intersection is the stratum closure; empty means the
    /// whole compactified ambient space.
    pub divisors: Vec<String>,
    pub dim: u32,
    #[serde(with = "int_serde")]
    pub deg: BigInt,
}

/// User-supplied Euler characteristic data for the generic section `H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionData {
    /// Strata containing `H`, listed with `H` among their divisors.
    pub strata: Vec<Stratum>,
    /// Full local fibre data for the augmented datum, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<LocalFiberDatum>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KValue {
    Numeric(BigInt),
    Symbolic,
}

impl Serialize for KValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            KValue::Numeric(k) => int_serde::serialize(k, s),
            KValue::Symbolic => s.serialize_str("symbolic"),
        }
    }
}

impl<'de> Deserialize<'de> for KValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            I(i64),
            U(u64),
            S(String),
        }
        match Repr::deserialize(d)? {
            Repr::I(i) => Ok(KValue::Numeric(i.into())),
            Repr::U(u) => Ok(KValue::Numeric(u.into())),
            Repr::S(s) if s == "symbolic" => Ok(KValue::Symbolic),
            Repr::S(s) => s
                .parse::<BigInt>()
                .map(KValue::Numeric)
                .map_err(|_| serde::de::Error::custom(format!("invalid k `{s}`"))),
        }
    }
}

/// Marks a datum produced by adding a generic section `H ∈ |L^k|`.
///
/// With a numeric `k` the extra multiplicity column is materialized (it is
/// the last entry of every `a`). With a symbolic `k` the divisors keep their
/// base columns and the extra column is `k*b_W` / `1` / `0` implicitly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Augmentation {
    pub k: KValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolutionDatum {
    pub ambient_dim: u32,
    pub p: usize,
    pub divisors: Vec<Divisor>,
    pub strata: Vec<Stratum>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<LocalFiberDatum>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ample: Option<AmpleVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<DegreeEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adjacent_pairs: Option<Vec<[String; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub section: Option<SectionData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub augmented: Option<Augmentation>,
}

/// `N_W`, which depends on `k` for symbolic augmented data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NValue {
    Int(BigInt),
    Poly(PolyInK),
}

impl std::fmt::Display for NValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NValue::Int(v) => write!(f, "{v}"),
            NValue::Poly(p) => write!(f, "{p}"),
        }
    }
}

impl ResolutionDatum {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Canonical serialization: pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("datum serializes");
        s.push('\n');
        s
    }

    pub fn divisor(&self, id: &str) -> Result<&Divisor> {
        self.divisors
            .iter()
            .find(|d| d.id == id)
            .ok_or_else(|| Error::UnknownDivisor(id.to_string()))
    }

    pub fn point(&self, id: &str) -> Result<&LocalFiberDatum> {
        self.points
            .iter()
            .find(|x| x.id == id)
            .ok_or_else(|| Error::UnknownPoint(id.to_string()))
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(
            self.augmented,
            Some(Augmentation {
                k: KValue::Symbolic
            })
        )
    }

    pub fn numeric_k(&self) -> Option<&BigInt> {
        match &self.augmented {
            Some(Augmentation {
                k: KValue::Numeric(k),
            }) => Some(k),
            _ => None,
        }
    }

    /// Number of columns of the tuple the zeta functions are built from.
    pub fn tuple_len(&self) -> usize {
        if self.is_symbolic() {
            self.p + 1
        } else {
            self.p
        }
    }

    /// Number of columns belonging to the original tuple `f_1..f_p`.
    pub fn base_p(&self) -> usize {
        if self.numeric_k().is_some() {
            self.p.saturating_sub(1)
        } else {
            self.p
        }
    }

    pub fn exceptional_ids(&self) -> Vec<&str> {
        self.divisors
            .iter()
            .filter(|d| d.exceptional)
            .map(|d| d.id.as_str())
            .collect()
    }

    /// `b_W` from the ample block, falling back to the divisor field.
    pub fn b_of(&self, id: &str) -> Option<BigInt> {
        self.ample
            .as_ref()
            .and_then(|a| a.b.get(id).cloned())
            .or_else(|| self.divisor(id).ok().and_then(|d| d.b.clone()))
    }

    pub fn ample_vector(&self) -> Result<&AmpleVector> {
        self.ample
            .as_ref()
            .ok_or_else(|| Error::MissingAmple("no `ample` block".into()))
    }

    /// Numeric multiplicity vector of length `tuple_len()`.
    pub fn multiplicities(&self, id: &str) -> Result<Vec<BigInt>> {
        let d = self.divisor(id)?;
        if self.is_symbolic() {
            return Err(Error::SymbolicChi(format!(
                "multiplicities of {id} depend on k"
            )));
        }
        Ok(d.a.clone())
    }

    /// `(a_W, N_W)`: `a_W` sums the base columns, `N_W` all columns.
    pub fn derived_quantities(&self, id: &str) -> Result<(BigInt, NValue)> {
        let d = self.divisor(id)?;
        let base = self.base_p();
        let a_w: BigInt = d.a.iter().take(base).sum();
        if self.is_symbolic() {
            let slope = if d.exceptional {
                self.b_of(id).ok_or_else(|| {
                    Error::MissingAmple(format!("no b coordinate for exceptional divisor {id}"))
                })?
            } else {
                BigInt::zero()
            };
            let constant = if id == SECTION_ID {
                &a_w + 1
            } else {
                a_w.clone()
            };
            return Ok((a_w, NValue::Poly(PolyInK::affine(&constant, &slope))));
        }
        let n_w: BigInt = d.a.iter().sum();
        Ok((a_w, NValue::Int(n_w)))
    }

    /// Unordered adjacency pairs `(W, W')`, `W < W'`, from nonempty strata and
    /// `adjacent_pairs`.
    pub fn adjacency(&self) -> BTreeSet<(String, String)> {
        let mut out = BTreeSet::new();
        let mut add = |a: &str, b: &str| {
            if a != b {
                let (x, y) = if a < b { (a, b) } else { (b, a) };
                out.insert((x.to_string(), y.to_string()));
            }
        };
        for s in self.strata.iter().filter(|s| s.is_nonempty()) {
            for (i, a) in s.divisors.iter().enumerate() {
                for b in &s.divisors[i + 1..] {
                    add(a, b);
                }
            }
        }
        for [a, b] in self.adjacent_pairs.iter().flatten() {
            add(a, b);
        }
        out
    }

    pub fn neighbours(&self, id: &str) -> BTreeSet<String> {
        self.adjacency()
            .into_iter()
            .filter_map(|(a, b)| {
                if a == id {
                    Some(b)
                } else if b == id {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Numeric `χ` of every stratum.
    pub fn numeric_strata(&self) -> Result<Vec<(&Stratum, BigInt)>> {
        self.strata
            .iter()
            .map(|s| Ok((s, s.chi.value_at(None, &s.label())?)))
            .collect()
    }

    /// Same datum with the tuple columns summed into one (the product view).
    pub fn diagonal_datum(&self) -> Result<ResolutionDatum> {
        if self.is_symbolic() {
            return Err(Error::SymbolicChi("cannot sum columns depending on k".into()));
        }
        let mut out = self.clone();
        for d in &mut out.divisors {
            d.a = vec![d.a.iter().sum()];
        }
        out.p = 1;
        out.augmented = None;
        Ok(out)
    }

    /// Turns a symbolic augmented datum into the numeric one at `k`.
    pub fn specialize(&self, k: &BigInt) -> Result<ResolutionDatum> {
        if !k.is_positive() {
            return Err(Error::Precondition(format!("k must be positive, got {k}")));
        }
        match &self.augmented {
            None => Ok(self.clone()),
            Some(Augmentation {
                k: KValue::Numeric(k0),
            }) => {
                if k0 == k {
                    Ok(self.clone())
                } else {
                    Err(Error::Precondition(format!(
                        "datum is already specialized at k={k0}, cannot respecialize at k={k}"
                    )))
                }
            }
            Some(Augmentation {
                k: KValue::Symbolic,
            }) => {
                let mut out = self.clone();
                for d in &mut out.divisors {
                    let extra = if d.exceptional {
                        self.b_of(&d.id).ok_or_else(|| {
                            Error::MissingAmple(format!("no b coordinate for {}", d.id))
                        })? * k
                    } else if d.id == SECTION_ID {
                        BigInt::from(1)
                    } else {
                        BigInt::zero()
                    };
                    d.a.push(extra);
                }
                for s in &mut out.strata {
                    s.chi = Chi::Int(s.chi.value_at(Some(k), &s.label())?);
                }
                for x in &mut out.points {
                    for e in &mut x.entries {
                        e.chi = Chi::Int(e.chi.value_at(Some(k), &format!("point {}", x.id))?);
                    }
                }
                out.p += 1;
                out.augmented = Some(Augmentation {
                    k: KValue::Numeric(k.clone()),
                });
                Ok(out)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets;

    #[test]
    fn derived_quantities_plain_and_symbolic() {
        let cusp = datasets::cusp();
        let (a, n) = cusp.derived_quantities("E3").unwrap();
        assert_eq!(a, BigInt::from(6));
        assert_eq!(n, NValue::Int(BigInt::from(6)));
        assert_eq!(
            cusp.derived_quantities("nope"),
            Err(Error::UnknownDivisor("nope".into()))
        );

        let six = crate::genericity::augment(&datasets::sixone_with(2, 3, 4), &KValue::Symbolic)
            .unwrap()
            .datum;
        // W1 has a_W = 0 and b = 2 here: N = 2k
        let (a, n) = six.derived_quantities("W1").unwrap();
        assert_eq!(a, BigInt::zero());
        assert_eq!(n, NValue::Poly(PolyInK::from_i64(&[0, 2])));
        let (_, n) = six.derived_quantities("H").unwrap();
        assert_eq!(n, NValue::Poly(PolyInK::from_i64(&[1])));
    }

    #[test]
    fn strict_transform_has_no_section_column() {
        let cusp = datasets::cusp();
        let (a, n) = cusp.derived_quantities("S").unwrap();
        assert_eq!(NValue::Int(a), n);
    }

    #[test]
    fn adjacency_is_symmetric_and_irreflexive() {
        for d in datasets::all() {
            let adj = d.adjacency();
            for (a, b) in &adj {
                assert_ne!(a, b);
                assert!(d.neighbours(a).contains(b));
                assert!(d.neighbours(b).contains(a));
            }
        }
    }

    #[test]
    fn canonical_files_round_trip_byte_identically() {
        for (name, text) in datasets::BUNDLED {
            let d = ResolutionDatum::from_json(text).unwrap();
            assert_eq!(d.to_json(), *text, "dataset {name}");
        }
    }

    #[test]
    fn malformed_json_is_a_parse_error() {
        assert!(matches!(
            ResolutionDatum::from_json("{"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            ResolutionDatum::from_json(r#"{"ambient_dim":1,"p":1,"divisors":[],"strata":[],"bogus":1}"#),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn big_values_accepted_as_strings() {
        let text = r#"{"ambient_dim":1,"p":1,
            "divisors":[{"id":"S","n":1,"a":["100000000000000000000000"]}],
            "strata":[{"divisors":["S"],"chi":1}]}"#;
        let d = ResolutionDatum::from_json(text).unwrap();
        assert_eq!(d.divisors[0].a[0].to_string(), "100000000000000000000000");
    }
}
