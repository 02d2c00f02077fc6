//! Bundled example data: the plane cusp, the node as a pair `(x, y)`, a
//! single smooth branch, and the two-blow-up chain over the plane with
//! `f = 1` and a parametric ample class.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::algebra::PolyInK;
use crate::model::{AmpleVector, Chi, DegreeEntry, ResolutionDatum};

pub const CUSP_JSON: &str = include_str!("../data/cusp.json");
pub const NODE_JSON: &str = include_str!("../data/node.json");
pub const SMOOTH_JSON: &str = include_str!("../data/smooth.json");
pub const SIXONE_JSON: &str = include_str!("../data/sixone.json");

/// `(name, canonical JSON)` for every bundled dataset.
pub const BUNDLED: &[(&str, &str)] = &[
    ("cusp", CUSP_JSON),
    ("node", NODE_JSON),
    ("smooth", SMOOTH_JSON),
    ("sixone", SIXONE_JSON),
];

fn parse(text: &str) -> ResolutionDatum {
    ResolutionDatum::from_json(text).expect("bundled dataset parses")
}

pub fn cusp() -> ResolutionDatum {
    parse(CUSP_JSON)
}

pub fn node() -> ResolutionDatum {
    parse(NODE_JSON)
}

pub fn smooth() -> ResolutionDatum {
    parse(SMOOTH_JSON)
}

/// The chain with `d = 5`, `b = (3, 4)`.
pub fn sixone() -> ResolutionDatum {
    parse(SIXONE_JSON)
}

pub fn by_name(name: &str) -> Option<ResolutionDatum> {
    BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| parse(text))
}

pub fn all() -> Vec<ResolutionDatum> {
    BUNDLED.iter().map(|(_, t)| parse(t)).collect()
}

/// Whether `(b1, b2)` is relatively ample for the chain: `0 < b1 < b2 < 2 b1`.
pub fn sixone_relatively_ample(b1: i64, b2: i64) -> bool {
    0 < b1 && b1 < b2 && b2 < 2 * b1
}

/// The chain with ample class `d*l - b1*W1 - b2*W2`.
///
/// Degrees and section data are recomputed from intersection numbers on the
/// twice blown-up plane; entries whose degree would not be positive (the
/// class is then not ample) are left out, so such data fail validation only
/// where a degree is actually needed.
pub fn sixone_with(b1: i64, b2: i64, d: i64) -> ResolutionDatum {
    let mut out = sixone();
    out.ample = Some(AmpleVector {
        d: d.into(),
        b: BTreeMap::from([("W1".to_string(), b1.into()), ("W2".to_string(), b2.into())]),
    });

    // L = d*l - b1*E1 - (b2 - b1)*E2 in the total-transform basis.
    let deg_y = d * d - b1 * b1 - (b2 - b1) * (b2 - b1);
    let deg_w1 = 2 * b1 - b2;
    let deg_w2 = b2 - b1;
    let entry = |ids: &[&str], dim: u32, deg: i64| DegreeEntry {
        divisors: ids.iter().map(|s| s.to_string()).collect(),
        dim,
        deg: deg.into(),
    };
    out.degrees = Some(
        [
            entry(&[], 2, deg_y),
            entry(&["W1"], 1, deg_w1),
            entry(&["W2"], 1, deg_w2),
            entry(&["W1", "W2"], 0, 1),
        ]
        .into_iter()
        .filter(|e| e.deg > BigInt::from(0))
        .collect(),
    );

    // chi(H) = -k^2 L^2 - k L.K with K = -3l + E1 + E2; removing the k*d
    // points at infinity and the points on W1, W2 gives the open stratum.
    let h_linear = 2 * d - b1 - b2;
    let section = out.section.as_mut().expect("chain carries section data");
    for s in &mut section.strata {
        let poly = match s.divisors.iter().map(String::as_str).collect::<Vec<_>>()[..] {
            ["H"] => PolyInK::from_i64(&[0, h_linear, -deg_y]),
            ["W1", "H"] => PolyInK::from_i64(&[0, deg_w1]),
            ["W2", "H"] => PolyInK::from_i64(&[0, deg_w2]),
            _ => continue,
        };
        s.chi = Chi::Poly(poly);
    }
    for x in section.points.iter_mut().flatten() {
        if x.id != "origin" {
            continue;
        }
        for e in &mut x.entries {
            let slope = if e.divisor == "W1" { deg_w1 } else { deg_w2 };
            e.chi = Chi::Poly(PolyInK::from_i64(&[1, -slope]));
        }
    }
    out
}
