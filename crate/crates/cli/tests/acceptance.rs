//! Acceptance suite: one PASS/FAIL line per criterion with its time limit.
//! Runs without the libtest harness so the lines always reach stdout.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode, Output};
use std::time::{Duration, Instant};

use logzeta::algebra::rational::{from_big, int, rat};
use logzeta::algebra::{sum_of_simple_terms, LinearForm, Rational, SimpleTerm};
use logzeta::asymptotics::{dominance_check, leading_chi_complement, leading_chi_section, LeadingTerm};
use logzeta::datasets;
use logzeta::genericity::{
    augment, check_avg, coincidences_at, make_avg, pole_separation_threshold, section_lines,
    sixone_example_cones, strong_mc_certificate,
};
use logzeta::model::{KValue, ResolutionDatum};
use logzeta::monodromy::{
    cancellation_diagnostics, exp_hyperplane, torus_divisor, Subtorus,
};
use logzeta::synth::{random_avg_config, random_factor_map, random_symbolic_augmented};
use logzeta::topzeta::candidates;
use logzeta::Exec;
use num_bigint::BigInt;
use num_integer::Integer;
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde_json::Value;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(format!("../core/data/{name}.json"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logzeta"))
        .args(args)
        .output()
        .expect("binary runs")
}

/// `--format json` report and exit code.
fn report(args: &[&str]) -> Result<(i32, Value), String> {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let o = cli(&a);
    let code = o.status.code().ok_or("killed")?;
    let v = serde_json::from_slice(&o.stdout).map_err(|e| format!("{args:?}: bad report: {e}"))?;
    Ok((code, v))
}

fn strs(v: &Value) -> Vec<String> {
    v.as_array()
        .map(|a| a.iter().map(|x| x.as_str().unwrap_or_default().to_string()).collect())
        .unwrap_or_default()
}

/// Phases and primitive vectors of a JSON subtorus list.
fn tori(v: &Value) -> BTreeSet<(Vec<String>, String)> {
    v.as_array()
        .into_iter()
        .flatten()
        .map(|t| (strs(&t["primitive"]), t["phase"].as_str().unwrap_or_default().to_string()))
        .collect()
}

fn criterion_1() -> Check {
    let f = data("cusp");
    let f = f.to_str().unwrap();
    // hand inclusion-exclusion over (N, nu) = (2,2), (3,3), (6,5) and the strict transform (1,1)
    let l = |a: i64, n: i64| LinearForm::from_i64(&[a], n);
    let hand = sum_of_simple_terms(
        1,
        &[
            SimpleTerm::new(int(1), vec![l(2, 2)]),
            SimpleTerm::new(int(1), vec![l(3, 3)]),
            SimpleTerm::new(int(-1), vec![l(6, 5)]),
            SimpleTerm::new(int(1), vec![l(1, 1), l(6, 5)]),
            SimpleTerm::new(int(1), vec![l(2, 2), l(6, 5)]),
            SimpleTerm::new(int(1), vec![l(3, 3), l(6, 5)]),
        ],
    )
    .map_err(|e| e.to_string())?;
    let (code, z) = report(&["topzeta", f])?;
    ensure(code == 0, "topzeta exit")?;
    let got = z["result"]["zeta"].as_str().unwrap_or_default();
    ensure(got == hand.to_string(), format!("zeta {got} vs oracle {hand}"))?;
    ensure(got == "(4*s+5)/((s+1)*(6*s+5))", format!("zeta {got}"))?;
    ensure(z["result"]["value_at_zero"] == "1/1", "Z(0) != 1")?;

    let (_, p) = report(&["poles", f])?;
    let orders: BTreeMap<String, u64> = p["result"]["classes"]
        .as_array()
        .ok_or("no classes")?
        .iter()
        .filter(|c| c["order"].as_u64() > Some(0))
        .map(|c| (c["location"].as_str().unwrap().to_string(), c["order"].as_u64().unwrap()))
        .collect();
    let want: BTreeMap<String, u64> = [("-1/1".into(), 1), ("-5/6".into(), 1)].into();
    ensure(orders == want, format!("pole orders {orders:?}"))?;

    let (_, s) = report(&["support", f])?;
    let phases: BTreeSet<String> = tori(&s["result"]["support"]).into_iter().map(|t| t.1).collect();
    let want: BTreeSet<String> = ["0/1", "1/6", "5/6"].map(String::from).into();
    ensure(phases == want, format!("support {phases:?}"))?;

    let (code, m) = report(&["check-mc", f])?;
    ensure(code == 0 && m["verdict"] == true, "check-mc failed")?;
    Ok("zeta, poles {-1:1, -5/6:1}, support {0, 1/6, 5/6}, check-mc".into())
}

fn criterion_2() -> Check {
    let f = data("node");
    let f = f.to_str().unwrap();
    let (_, z) = report(&["topzeta", f])?;
    let got = z["result"]["zeta"].as_str().unwrap_or_default();
    ensure(got == "1/((s1+1)*(s2+1))", format!("zeta {got}"))?;
    let (_, m) = report(&["monzeta", f, "--point", "origin"])?;
    ensure(m["result"]["trivial"] == true && m["result"]["zeta"] == "1", "origin zeta not 1")?;
    let (_, s) = report(&["support", f])?;
    let want: BTreeSet<(Vec<String>, String)> = [
        (vec!["1".to_string(), "0".to_string()], "0/1".to_string()),
        (vec!["0".to_string(), "1".to_string()], "0/1".to_string()),
    ]
    .into();
    ensure(tori(&s["result"]["support"]) == want, "support is not {t1=1} u {t2=1}")?;
    let (code, c) = report(&["check-mc", f])?;
    ensure(code == 0 && c["verdict"] == true, "check-mc failed")?;

    // p = 1 datum with summed multiplicities, built by editing the JSON
    let mut v: Value = serde_json::from_str(datasets::NODE_JSON).unwrap();
    v["p"] = 1.into();
    for d in v["divisors"].as_array_mut().unwrap() {
        let s: i64 = d["a"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).sum();
        d["a"] = serde_json::json!([s]);
    }
    let one = scratch("node-p1.json");
    fs::write(&one, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    let (_, diag) = report(&["topzeta", f, "--diagonal"])?;
    let (_, p1) = report(&["topzeta", one.to_str().unwrap()])?;
    ensure(
        diag["result"]["zeta"] == p1["result"]["zeta"],
        format!("diagonal {} vs p=1 {}", diag["result"]["zeta"], p1["result"]["zeta"]),
    )?;
    Ok(format!("zeta, trivial origin, support, check-mc, diagonal = {}", p1["result"]["zeta"]))
}

fn criterion_3() -> Check {
    let mut rel = 0;
    let mut rejected = 0;
    for b1 in 1..=60i64 {
        for b2 in 1..=60i64 {
            let c = sixone_example_cones(b1, b2).map_err(|e| e.to_string())?;
            ensure(c.rel == (0 < b1 && b1 < b2 && b2 < 2 * b1), format!("rel at ({b1},{b2})"))?;
            ensure(c.a1 == (c.vg && !c.a2), format!("A1 != vg \\ A2 at ({b1},{b2})"))?;
            ensure(c.a1 == (c.vg && 2 * b2 < 3 * b1), format!("A1 predicate at ({b1},{b2})"))?;
            if !c.rel {
                continue;
            }
            rel += 1;
            let d = datasets::sixone_with(b1, b2, b1 + b2);
            let avg = check_avg(&d, d.ample_vector().unwrap()).map_err(|e| e.to_string())?;
            ensure(
                avg.verdict() == (3 * b1 != 2 * b2),
                format!("avg check at ({b1},{b2}) gave {}", avg.verdict()),
            )?;
            ensure(c.vg == avg.verdict(), "vg flag disagrees with avg check")?;
            if !avg.verdict() {
                rejected += 1;
            }
        }
    }
    // CLI on the resonant point (2, 3)
    let p = scratch("sixone-2-3.json");
    fs::write(&p, datasets::sixone_with(2, 3, 4).to_json()).unwrap();
    let o = cli(&["avg", "check", p.to_str().unwrap()]);
    ensure(o.status.code() == Some(1), "avg check (2,3) exit")?;
    ensure(String::from_utf8_lossy(&o.stdout).contains("3*b_W1=2*b_W2"), "relation text")?;

    // certificate roots -n_Wi/N_Wi = -(i+1)/(k b_i)
    let mut certs = 0;
    for (b1, b2) in [(3, 4), (3, 5), (4, 5), (4, 7), (5, 6), (5, 8), (7, 9), (7, 11)] {
        let aug = augment(&datasets::sixone_with(b1, b2, b1 + b2), &KValue::Symbolic)
            .map_err(|e| e.to_string())?
            .datum;
        let k0 = pole_separation_threshold(&aug).map_err(|e| e.to_string())?.k0;
        let k = (0..8)
            .map(|i| &k0 + BigInt::from(i) + BigInt::from(1))
            .find_map(|k| strong_mc_certificate(&aug, &k, Exec::default()).ok().map(|c| (k, c)));
        let (k, c) = k.ok_or(format!("no certificate for ({b1},{b2})"))?;
        for (i, b) in [(1i64, b1), (2, b2)] {
            let e = c
                .exceptional
                .iter()
                .find(|e| e.divisor == format!("W{i}"))
                .ok_or("missing divisor")?;
            let alpha = Rational::new(BigInt::from(i + 1), &k * BigInt::from(b));
            ensure(e.root == -alpha.clone(), format!("root {} vs -alpha {}", e.root, alpha))?;
        }
        certs += 1;
    }
    Ok(format!(
        "{rel} relatively ample points, {rejected} rejected (all on 3b1=2b2), {certs} certificates"
    ))
}

fn criterion_4() -> Check {
    let mut rng = StdRng::seed_from_u64(4);
    for i in 0..200 {
        let (d, ample) = random_avg_config(&mut rng, 6, 50);
        let made = make_avg(&d, &ample).map_err(|e| e.to_string())?;
        let r = check_avg(&d, &made.ample).map_err(|e| e.to_string())?;
        ensure(r.verdict(), format!("config {i}: {:?}", r.violations))?;
    }
    Ok("200 configurations".into())
}

fn criterion_5() -> Check {
    let mut rng = StdRng::seed_from_u64(5);
    let mut data = 0;
    let mut below = 0;
    while data < 100 {
        let d = random_symbolic_augmented(&mut rng);
        let Ok(t) = pole_separation_threshold(&d) else {
            continue;
        };
        data += 1;
        let lines = section_lines(&d).map_err(|e| e.to_string())?;
        let mut k = t.k0.clone();
        for _ in 0..=20 {
            let clash = coincidences_at(&lines, &k);
            ensure(clash.is_empty(), format!("k={k} >= k0={}: {clash:?}", t.k0))?;
            k += 1;
        }
        if let Some(w) = t.witnesses.last() {
            ensure(w.k < t.k0, "witness above threshold")?;
            let clash = coincidences_at(&lines, &w.k);
            ensure(!clash.is_empty(), format!("witness k={} shows no coincidence", w.k))?;
            below += 1;
        }
    }
    ensure(below > 0, "no datum exhibits a coincidence below k0")?;
    Ok(format!("{data} data, {below} with a coincidence below k0"))
}

fn criterion_6() -> Check {
    let mut rng = StdRng::seed_from_u64(6);
    for i in 0..500 {
        let q = 1 + i % 3;
        let z1 = random_factor_map(&mut rng, q, 12, 1 + i % 4);
        let z2 = random_factor_map(&mut rng, q, 12, 1 + (i / 4) % 4);
        let prod = z1.product(&z2).map_err(|e| e.to_string())?;
        let lhs = torus_divisor(&prod).map_err(|e| e.to_string())?;
        let rhs = torus_divisor(&z1).unwrap().sum(&torus_divisor(&z2).unwrap());
        ensure(lhs == rhs, format!("additivity fails on map {i}"))?;
        for (a, e) in &z1.factors {
            let mut single = logzeta::monodromy::MonodromyZetaFactors::new(q);
            single.push(a.clone(), e.clone()).unwrap();
            let div = torus_divisor(&single).unwrap();
            let d = a.iter().fold(BigInt::from(0), |g, x| g.gcd(x));
            ensure(BigInt::from(div.components.len()) == d, format!("{a:?}: count != gcd"))?;
        }
    }
    Ok("500 factor maps".into())
}

fn all_bundled_with_columns() -> Vec<ResolutionDatum> {
    let mut out: Vec<ResolutionDatum> = datasets::all().into_iter().filter(|d| d.tuple_len() > 0).collect();
    out.push(augment(&datasets::sixone(), &KValue::Numeric(5.into())).unwrap().datum);
    out
}

fn criterion_7() -> Check {
    let mut n = 0;
    for d in all_bundled_with_columns() {
        for c in candidates(&d).map_err(|e| e.to_string())? {
            let base = exp_hyperplane(&c.form).map_err(|e| e.to_string())?;
            for s in [2, 3] {
                let scaled = exp_hyperplane(&c.form.scaled(&s.into())).map_err(|e| e.to_string())?;
                ensure(scaled == base, format!("{} scaled by {s}", c.form))?;
            }
            n += 1;
        }
    }
    Ok(format!("{n} candidates, c = 2, 3"))
}

/// Zero-net subtori per point, from first principles: `(t^a - 1)` vanishes on
/// `t^(a/d) = exp(2 pi i j/d)`, `j < d`.
fn cancelled_by_hand(d: &ResolutionDatum) -> BTreeMap<(String, Subtorus), BTreeSet<String>> {
    let mut out = BTreeMap::new();
    for x in &d.points {
        let mut net: BTreeMap<Subtorus, (BigInt, BTreeSet<String>)> = BTreeMap::new();
        for e in &x.entries {
            let chi = e.chi.as_int().cloned().unwrap_or_default();
            if chi == BigInt::from(0) {
                continue;
            }
            let a = d.multiplicities(&e.divisor).unwrap();
            let g = a.iter().fold(BigInt::from(0), |g, v| g.gcd(v));
            let prim: Vec<BigInt> = a.iter().map(|v| v / &g).collect();
            let mut j = BigInt::from(0);
            while j < g {
                let t = Subtorus::new(prim.clone(), Rational::new(j.clone(), g.clone())).unwrap();
                let slot = net.entry(t).or_default();
                slot.0 -= &chi;
                slot.1.insert(e.divisor.clone());
                j += 1;
            }
        }
        for (t, (m, ids)) in net {
            if m == BigInt::from(0) {
                out.insert((x.id.clone(), t), ids);
            }
        }
    }
    out
}

fn criterion_8() -> Check {
    let mut reported = 0;
    for d in all_bundled_with_columns() {
        let got: BTreeMap<(String, Subtorus), BTreeSet<String>> = cancellation_diagnostics(&d)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|c| {
                let ids = c.contributions.iter().map(|x| x.divisor.clone()).collect();
                ((c.point, c.subtorus), ids)
            })
            .collect();
        ensure(got == cancelled_by_hand(&d), "cancellation report differs from hand count")?;
        reported += got.len();
    }
    // cusp: the cube and square roots of unity cancel, each from two divisors
    let cusp = cancellation_diagnostics(&datasets::cusp()).map_err(|e| e.to_string())?;
    let phases: Vec<Rational> = cusp.iter().map(|c| c.subtorus.phase.clone()).collect();
    ensure(phases == vec![rat(1, 3), rat(1, 2), rat(2, 3)], "cusp cancelled phases")?;
    ensure(cusp.iter().all(|c| c.contributions.len() == 2), "cusp contributions")?;

    // equal-dimension terms never cancel at top degree
    let mut rng = StdRng::seed_from_u64(8);
    for _ in 0..500 {
        use rand::Rng;
        let dim = rng.gen_range(0..6u32);
        let section = dim > 0 && rng.gen_bool(0.5);
        let degs: Vec<i64> = (0..rng.gen_range(1..6)).map(|_| rng.gen_range(1..100)).collect();
        let terms: Vec<LeadingTerm> = degs
            .iter()
            .map(|&g| {
                if section {
                    leading_chi_section(dim, &g.into()).unwrap()
                } else {
                    leading_chi_complement(dim, &g.into()).unwrap()
                }
            })
            .collect();
        let r = dominance_check(&terms);
        ensure(!r.vanishes_identically, "equal-dimension terms cancelled")?;
        let top = r.top.ok_or("no top term")?;
        ensure(top.coefficient == BigInt::from(degs.iter().sum::<i64>()), "top != sum of degrees")?;
    }
    // the bundled chain's degree data, one term per curve of dimension one
    let six = datasets::sixone();
    let terms: Vec<LeadingTerm> = six
        .degrees
        .iter()
        .flatten()
        .filter(|e| e.dim == 1)
        .map(|e| leading_chi_complement(1, &e.deg).unwrap())
        .collect();
    let r = dominance_check(&terms);
    ensure(!r.vanishes_identically && from_big(&r.top_sum) == int(-3), "chain curves")?;
    Ok(format!("{reported} cancelled subtori traced, 500 dominance samples"))
}

type Criterion = (&'static str, fn() -> Check, Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("cusp pipeline", criterion_1, Duration::from_secs(1)),
        ("node pipeline", criterion_2, Duration::from_secs(1)),
        ("two-blow-up chain", criterion_3, Duration::from_secs(5)),
        ("make_avg property", criterion_4, Duration::from_secs(10)),
        ("threshold soundness", criterion_5, Duration::from_secs(10)),
        ("torus divisor algebra", criterion_6, Duration::from_secs(5)),
        ("Exp scaling invariance", criterion_7, Duration::from_secs(1)),
        ("cancellation diagnostics", criterion_8, Duration::from_secs(5)),
    ];
    let mut failed = 0;
    for (i, (name, f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = f();
        let t = start.elapsed();
        let line = match (&r, t <= *limit) {
            (Ok(detail), true) => format!("PASS {detail}"),
            (Ok(detail), false) => format!("FAIL too slow ({detail})"),
            (Err(e), _) => format!("FAIL {e}"),
        };
        if !line.starts_with("PASS") {
            failed += 1;
        }
        println!(
            "criterion {} [{name}]: {line} | exact equality | {:.3}s of {}s",
            i + 1,
            t.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
