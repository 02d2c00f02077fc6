//! One function per subcommand, each returning a structured result and its
//! text rendering.

use std::fs;
use std::path::{Path, PathBuf};

use logzeta::algebra::Rational;
use logzeta::asymptotics::{
    dominance_check, leading_chi_ambient, leading_chi_complement, leading_chi_section,
    parse_leading, LeadingTerm,
};
use logzeta::datasets;
use logzeta::genericity::{
    augment, check_avg, make_avg, sixone_example_cones, strong_mc_certificate, AvgReport,
    ChiSource,
};
use logzeta::model::{validate, KValue, ResolutionDatum};
use logzeta::monodromy::{
    check_monodromy_conjecture_with, local_monodromy_zeta, monodromy_support_with,
    restrict_support_to_diagonal, torus_divisor, PoleCheck,
};
use logzeta::topzeta::{
    analyze_poles, build_topzeta_with, candidates, residue_first_order, specialize_diagonal,
    Residue,
};
use logzeta::{Error, Exec};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::report::{form, q, sha256_hex, subtorus, subtorus_text, InputError, Outcome};

type CmdResult = Result<Outcome, InputError>;

/// Raw bytes and digest of an input file.
pub struct Input {
    pub text: String,
    pub digest: String,
}

pub fn read_input(path: &Path) -> Result<Input, InputError> {
    let bytes = fs::read(path)
        .map_err(|e| InputError::new("io", format!("{}: {e}", path.display())))?;
    let digest = sha256_hex(&bytes);
    let text = String::from_utf8(bytes)
        .map_err(|_| InputError::new("parse", format!("{}: not UTF-8", path.display())))?;
    Ok(Input { text, digest })
}

fn parse(input: &Input) -> Result<ResolutionDatum, InputError> {
    ResolutionDatum::from_json(&input.text).map_err(|e| InputError::new("parse", e.to_string()))
}

/// Parses and rejects data with schema violations.
pub fn load(input: &Input) -> Result<ResolutionDatum, InputError> {
    let d = parse(input)?;
    let r = validate(&d);
    if !r.is_valid() {
        return Err(InputError::new("invalid", r.violations.join("; ")));
    }
    Ok(d)
}

pub fn cmd_validate(input: &Input) -> Result<(Outcome, bool), InputError> {
    let d = parse(input)?;
    let r = validate(&d);
    let mut text = vec![format!("valid: {}", r.is_valid())];
    text.extend(r.violations.iter().map(|v| format!("violation: {v}")));
    text.extend(r.warnings.iter().map(|v| format!("warning: {v}")));
    let result = json!({
        "valid": r.is_valid(),
        "violations": r.violations,
        "warnings": r.warnings,
        "divisors": d.divisors.len(),
        "p": d.p,
        "augmented": d.augmented.as_ref().map(|a| &a.k),
    });
    Ok((Outcome::new(result, text, Some(r.is_valid())), r.is_valid()))
}

pub fn cmd_topzeta(d: &ResolutionDatum, diagonal: bool, exec: Exec) -> CmdResult {
    let mut z = build_topzeta_with(d, exec)?;
    if diagonal {
        z = specialize_diagonal(&z)?;
    }
    let zero = vec![Rational::from_integer(0.into()); z.nvars()];
    let at_zero = z.eval(&zero);
    let denominator: Vec<Value> = z
        .denominator()
        .iter()
        .map(|(f, e)| json!({ "form": form(f), "exponent": e }))
        .collect();
    let result = json!({
        "nvars": z.nvars(),
        "zeta": z.to_string(),
        "numerator": z.numerator().to_string(),
        "denominator": denominator,
        "value_at_zero": at_zero.as_ref().map(q),
    });
    let mut text = vec![format!("zeta: {z}")];
    if let Some(v) = &at_zero {
        text.push(format!("value at 0: {}", q(v)));
    }
    Ok(Outcome::new(result, text, None))
}

pub fn cmd_poles(d: &ResolutionDatum, exec: Exec) -> CmdResult {
    let report = analyze_poles(d, exec)?;
    let cands = candidates(d)?;
    let mut text = vec![format!("zeta: {}", report.zeta)];
    let classes: Vec<Value> = report
        .classes
        .iter()
        .map(|c| {
            let at = c.location.as_ref().map(|l| format!(" at s={}", q(l))).unwrap_or_default();
            text.push(format!(
                "class {}=0{at}: order {} (bound {}) [{}]",
                form(&c.class),
                c.order,
                c.stratum_bound.unwrap_or(0),
                c.divisors.join(", ")
            ));
            json!({
                "class": form(&c.class),
                "divisors": c.divisors,
                "order": c.order,
                "location": c.location.as_ref().map(q),
                "stratum_bound": c.stratum_bound,
            })
        })
        .collect();
    let candidates: Vec<Value> = report
        .candidates
        .iter()
        .zip(&cands)
        .map(|(c, h)| {
            let residue = match residue_first_order(&report.zeta, h) {
                Ok(Residue::Value(v)) => Some(q(&v)),
                Ok(Residue::Restricted { function, .. }) => Some(function.to_string()),
                Err(_) => None,
            };
            json!({
                "divisor": c.candidate.divisor,
                "form": form(&c.candidate.form),
                "order": c.order,
                "residue": residue,
            })
        })
        .collect();
    let result = json!({
        "zeta": report.zeta.to_string(),
        "classes": classes,
        "candidates": candidates,
    });
    Ok(Outcome::new(result, text, None))
}

pub fn cmd_monzeta(d: &ResolutionDatum, point: &str) -> CmdResult {
    let z = local_monodromy_zeta(d, point)?;
    let div = torus_divisor(&z)?;
    let factors: Vec<Value> = z
        .factors
        .iter()
        .map(|(a, e)| json!({ "a": a.iter().map(|x| x.to_string()).collect::<Vec<_>>(), "exponent": e.to_string() }))
        .collect();
    let mut text = vec![format!("point: {point}"), format!("zeta: {z}")];
    let components: Vec<Value> = div
        .components
        .iter()
        .map(|(t, m)| {
            text.push(format!("component {} with multiplicity {m}", subtorus_text(t)));
            let mut v = subtorus(t);
            v["multiplicity"] = json!(m.to_string());
            v
        })
        .collect();
    let result = json!({
        "point": point,
        "zeta": z.to_string(),
        "trivial": z.is_one(),
        "factors": factors,
        "divisor": components,
    });
    Ok(Outcome::new(result, text, None))
}

pub fn cmd_support(d: &ResolutionDatum, diagonal: bool, exec: Exec) -> CmdResult {
    let s = monodromy_support_with(d, exec)?;
    let mut text: Vec<String> = s.iter().map(|t| format!("support: {}", subtorus_text(t))).collect();
    let mut result = json!({ "support": s.iter().map(subtorus).collect::<Vec<_>>() });
    if diagonal {
        let r = restrict_support_to_diagonal(&s)?;
        text.extend(r.iter().map(|t| format!("diagonal: {}", subtorus_text(t))));
        result["diagonal"] = json!(r.iter().map(subtorus).collect::<Vec<_>>());
    }
    Ok(Outcome::new(result, text, None))
}

fn pole_check(p: &PoleCheck) -> Value {
    json!({
        "class": form(&p.class),
        "divisors": p.divisors,
        "order": p.order,
        "exp": subtorus(&p.exp),
        "in_support": p.in_support,
    })
}

pub fn cmd_check_mc(d: &ResolutionDatum, exec: Exec) -> CmdResult {
    let r = check_monodromy_conjecture_with(d, exec)?;
    let mut text = Vec::new();
    for p in &r.poles {
        text.push(format!(
            "pole {}=0 (order {}): Exp = {} {}",
            form(&p.class),
            p.order,
            subtorus_text(&p.exp),
            if p.in_support { "in support" } else { "NOT in support" }
        ));
    }
    let cancellations: Vec<Value> = r
        .cancellations
        .iter()
        .map(|c| {
            let parts: Vec<String> = c
                .contributions
                .iter()
                .map(|x| format!("{} (chi {}, {:+})", x.divisor, x.local_chi, x.multiplicity))
                .collect();
            text.push(format!(
                "cancelled at {}: {} from {}",
                c.point,
                subtorus_text(&c.subtorus),
                parts.join(", ")
            ));
            json!({
                "point": c.point,
                "subtorus": subtorus(&c.subtorus),
                "contributions": c.contributions.iter().map(|x| json!({
                    "divisor": x.divisor,
                    "local_chi": x.local_chi.to_string(),
                    "multiplicity": x.multiplicity.to_string(),
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    let result = json!({
        "poles": r.poles.iter().map(pole_check).collect::<Vec<_>>(),
        "candidates": r.candidates.iter().map(pole_check).collect::<Vec<_>>(),
        "support": r.support.iter().map(subtorus).collect::<Vec<_>>(),
        "cancellations": cancellations,
        "witnesses": r.witnesses().map(|p| form(&p.class)).collect::<Vec<_>>(),
    });
    Ok(Outcome::new(result, text, Some(r.verdict)))
}

pub fn cmd_augment(d: &ResolutionDatum, k: &KValue, output: Option<&PathBuf>) -> CmdResult {
    let aug = augment(d, k)?;
    let source = match aug.chi_source {
        ChiSource::Section => "section",
        ChiSource::LeadingTerms => "leading-terms",
    };
    let k_text = match k {
        KValue::Numeric(k) => k.to_string(),
        KValue::Symbolic => "symbolic".into(),
    };
    let mut text = vec![format!("k: {k_text}"), format!("section data: {source}")];
    let mut result = json!({
        "k": k_text,
        "chi_source": source,
        "divisors": aug.datum.divisors.iter().map(|d| d.id.clone()).collect::<Vec<_>>(),
    });
    match output {
        Some(path) => {
            fs::write(path, aug.datum.to_json())
                .map_err(|e| InputError::new("io", format!("{}: {e}", path.display())))?;
            text.push(format!("written: {}", path.display()));
        }
        None => {
            result["datum"] = serde_json::to_value(&aug.datum).expect("datum serializes");
            text.push(aug.datum.to_json().trim_end().to_string());
        }
    }
    Ok(Outcome::new(result, text, None))
}

fn avg_json(r: &AvgReport) -> Value {
    json!({
        "violations": r.violations.iter().map(|v| json!({
            "w": v.w, "w_prime": v.w_prime, "value": v.value.to_string(), "relation": v.relation,
        })).collect::<Vec<_>>(),
        "witnesses": r.witnesses.iter().map(|w| json!({
            "w": w.w, "w_prime": w.w_prime, "value": q(&w.value),
        })).collect::<Vec<_>>(),
    })
}

pub fn cmd_avg_check(d: &ResolutionDatum) -> CmdResult {
    let r = check_avg(d, d.ample_vector()?)?;
    let mut text: Vec<String> = r
        .violations
        .iter()
        .map(|v| format!("violation: {} -> {}: {}", v.w, v.w_prime, v.relation))
        .collect();
    text.extend(
        r.witnesses
            .iter()
            .map(|w| format!("ok: n_{}*b_{}/b_{} = {}", w.w, w.w_prime, w.w, q(&w.value))),
    );
    Ok(Outcome::new(avg_json(&r), text, Some(r.verdict())))
}

pub fn cmd_avg_make(d: &ResolutionDatum, output: Option<&PathBuf>) -> CmdResult {
    let made = make_avg(d, d.ample_vector()?)?;
    let recheck = check_avg(d, &made.ample)?;
    let mut text = vec![format!("p: {}", made.p), format!("d: {}", made.ample.d)];
    for (w, b) in &made.ample.b {
        text.push(format!("b_{w}: {b} (p_{w} = {})", made.primes[w]));
    }
    if let Some(path) = output {
        let mut out = d.clone();
        out.ample = Some(made.ample.clone());
        fs::write(path, out.to_json())
            .map_err(|e| InputError::new("io", format!("{}: {e}", path.display())))?;
        text.push(format!("written: {}", path.display()));
    }
    let result = json!({
        "p": made.p.to_string(),
        "primes": made.primes.iter().map(|(w, p)| (w.clone(), json!(p.to_string()))).collect::<serde_json::Map<_, _>>(),
        "ample": serde_json::to_value(&made.ample).expect("ample serializes"),
        "check": avg_json(&recheck),
    });
    Ok(Outcome::new(result, text, Some(recheck.verdict())))
}

pub fn cmd_avg_cones(b1: i64, b2: i64) -> CmdResult {
    let r = sixone_example_cones(b1, b2)?;
    let text = vec![format!(
        "(b1, b2) = ({b1}, {b2}): rel {}, vg {}, A1 {}, A2 {}",
        r.rel, r.vg, r.a1, r.a2
    )];
    let result = json!({ "b1": b1, "b2": b2, "rel": r.rel, "vg": r.vg, "a1": r.a1, "a2": r.a2 });
    Ok(Outcome::new(result, text, None))
}

pub fn cmd_strong_mc(d: &ResolutionDatum, k: &BigInt, exec: Exec) -> CmdResult {
    let aug = if d.augmented.is_some() {
        d.clone()
    } else {
        augment(d, &KValue::Symbolic)?.datum
    };
    match strong_mc_certificate(&aug, k, exec) {
        Ok(c) => {
            let mut text = vec![format!("k: {} (threshold k0 = {})", c.k, c.k0)];
            let exceptional: Vec<Value> = c
                .exceptional
                .iter()
                .map(|e| {
                    text.push(format!(
                        "{}: root {} of {}=0, residue sum {}, l = {}",
                        e.divisor,
                        q(&e.root),
                        form(&e.hyperplane),
                        q(&e.residue),
                        e.frak_l_witness.as_ref().map_or("none".into(), |l| {
                            format!("({})", l.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
                        })
                    ));
                    json!({
                        "divisor": e.divisor,
                        "hyperplane": form(&e.hyperplane),
                        "root": q(&e.root),
                        "residue_sum": q(&e.residue),
                        "non_resonance": e.non_resonance.iter().map(|w| json!({
                            "w_prime": w.w_prime, "value": q(&w.value),
                        })).collect::<Vec<_>>(),
                        "l_witness": e.frak_l_witness.as_ref().map(|l| l.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
                    })
                })
                .collect();
            if !c.trivial.is_empty() {
                text.push(format!("trivial: {}", c.trivial.join(", ")));
            }
            text.push(c.label.to_string());
            let result = json!({
                "k": c.k.to_string(),
                "k0": c.k0.to_string(),
                "label": c.label,
                "exceptional": exceptional,
                "trivial": c.trivial,
            });
            Ok(Outcome::new(result, text, Some(true)))
        }
        Err(e @ (Error::NotLogVeryGeneric(_) | Error::Hypothesis(_))) => {
            let msg = e.to_string();
            Ok(Outcome::new(json!({ "refused": msg }), vec![format!("refused: {msg}")], Some(false)))
        }
        Err(e) => Err(e.into()),
    }
}

fn term_json(t: &LeadingTerm) -> Value {
    let mut v = serde_json::to_value(t).expect("term serializes");
    v["display"] = json!(t.to_string());
    v["exact"] = json!(t.exact);
    v["coefficient"] = json!(t.coefficient.to_string());
    v
}

pub enum AsymKind {
    Complement,
    Section,
    Ambient,
}

pub fn cmd_asym_term(kind: AsymKind, dim: u32, deg: &BigInt) -> CmdResult {
    let t = match kind {
        AsymKind::Complement => leading_chi_complement(dim, deg),
        AsymKind::Section => leading_chi_section(dim, deg),
        AsymKind::Ambient => leading_chi_ambient(dim, deg),
    }?;
    Ok(Outcome::new(json!({ "term": term_json(&t) }), vec![format!("leading term: {t}")], None))
}

pub fn cmd_asym_dominance(terms: &[String]) -> CmdResult {
    let ts = terms
        .iter()
        .map(|s| parse_leading(s))
        .collect::<Result<Vec<_>, _>>()?;
    let r = dominance_check(&ts);
    let text = vec![match &r.top {
        Some(t) => format!("top: {t}"),
        None => "top-degree terms cancel".into(),
    }];
    let result = json!({
        "vanishes_identically": r.vanishes_identically,
        "top": r.top.as_ref().map(term_json),
        "top_sum": r.top_sum.to_string(),
    });
    Ok(Outcome::new(result, text, Some(!r.vanishes_identically)))
}

/// Canonical JSON of a bundled dataset, or the chain at custom `(b1, b2, d)`.
pub fn example_json(name: &str, b: Option<(i64, i64)>, d: Option<i64>) -> Result<String, InputError> {
    match (name, b) {
        ("sixone", Some((b1, b2))) => {
            if b1 <= 0 || b2 <= b1 || 2 * b1 <= b2 {
                return Err(InputError::new(
                    "usage",
                    format!("({b1}, {b2}) is not relatively ample (need 0 < b1 < b2 < 2 b1)"),
                ));
            }
            Ok(datasets::sixone_with(b1, b2, d.unwrap_or(b1 + b2)).to_json())
        }
        (_, Some(_)) => Err(InputError::new("usage", "--b1/--b2 apply to `sixone` only")),
        _ => datasets::BUNDLED
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, t)| t.to_string())
            .ok_or_else(|| {
                let names: Vec<&str> = datasets::BUNDLED.iter().map(|(n, _)| *n).collect();
                InputError::new("usage", format!("unknown example `{name}` (one of {})", names.join(", ")))
            }),
    }
}
