//! Acceptance run: one line per criterion, nonzero exit if any fails.

mod common;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{
    fixture_text, invariant_factors_by_minors, load_fixture, manifest, orientable_by_brute_force,
    random_connected_gluing,
};
use lenscert::certificate::{CertificateBody, Level};
use lenscert::galois::DEFAULT_PRIME_CEILING;
use lenscert::intlinalg::{abelianization, hadamard_torsion_bound, smith_normal_form};
use lenscert::presentation::{fundamental_group, GroupPresentation, Word};
use lenscert::projmat::{subgroup_order, ProjMatrix};
use lenscert::trianglerep::{
    bound_report, build_hyperbolic_rep, build_nonhyperbolic_cert, classify, cosine_norm, cosine_norm_numeric,
    cyclotomic_closed_form, cyclotomic_eval, field_degree_report, hyperbolic_triples, EmbeddingVerdict,
    NormVariant,
};
use lenscert::triangulation::{orientation_check, validate};
use lenscert::{Certificate, IntMatrix};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let spent = start.elapsed();
    ensure(spent < limit, || format!("took {spent:.2?}, limit {limit:?}"))
}

fn figure_eight() -> Check {
    let start = Instant::now();
    let cert = Certificate::parse(&fixture_text("fig8.cert")).map_err(|e| e.to_string())?;
    let report = cert.verify();
    ensure(report.accepted, || format!("rejected: {:?}", report.failure))?;
    ensure(report.mat_mults == 10, || format!("mat_mults={}", report.mat_mults))?;
    let CertificateBody::NonAbelianRep {
        spec, matrices, witness, ..
    } = &cert.body
    else {
        return Err("not a representation certificate".into());
    };
    ensure(spec.order() == 25, || format!("field order {}", spec.order()))?;
    let ab = Word::from_letters(vec![(0, 1), (1, 1)]);
    let ba = Word::from_letters(vec![(1, 1), (0, 1)]);
    ensure(witness == &(ab, ba), || "witness is not (ab, ba)".into())?;
    let gens: Vec<ProjMatrix> = matrices
        .iter()
        .map(|m| ProjMatrix::new(*spec, *m).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let order = subgroup_order(&gens, 1000).ok_or("image larger than 1000")?;
    ensure(10 % order == 0, || format!("image order {order} does not divide 10"))?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("mat_mults=10, image order {order}, field F_25"))
}

fn triple_sweep() -> Check {
    let start = Instant::now();
    let triples = hyperbolic_triples(19);
    let mut reps = 0;
    let mut abelian = 0;
    for t in &triples {
        let report = field_degree_report(t);
        ensure(matches!(report.verdict, EmbeddingVerdict::Witness { .. }), || {
            format!("{:?}: no embedding witness ({:?})", t.n, report.verdict)
        })?;
        let cert = if t.is_hyperbolic_coprime() {
            let rep = build_hyperbolic_rep(t, DEFAULT_PRIME_CEILING).map_err(|e| format!("{:?}: {e}", t.n))?;
            let c = &rep.checks;
            let orders_ok = c.orders.iter().zip(t.n).all(|(&o, n)| o == n as u128);
            ensure(orders_ok && c.nonabelian && c.quadratic_ok && c.trace_ok, || {
                format!("{:?}: checks {c:?}", t.n)
            })?;
            reps += 1;
            rep.certificate()
        } else {
            abelian += 1;
            build_nonhyperbolic_cert(t).map_err(|e| format!("{:?}: {e}", t.n))?
        };
        let parsed = Certificate::parse(&cert.to_text()).map_err(|e| format!("{:?}: {e}", t.n))?;
        let report = parsed.verify();
        ensure(report.accepted, || format!("{:?}: {:?}", t.n, report.failure))?;
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!(
        "{} hyperbolic triples with n <= 19: {reps} representations, {abelian} abelian, all verified, all with embedding witnesses",
        triples.len()
    ))
}

fn cosine_norms() -> Check {
    let start = Instant::now();
    let mut worst = 0f64;
    for n in 3..=200u64 {
        for (variant, shift) in [(NormVariant::Plain, 0.0), (NormVariant::MinusTwo, 2.0)] {
            let closed = cosine_norm(n, variant).map_err(|e| e.to_string())? as f64;
            let err = (closed - cosine_norm_numeric(n, shift)).abs();
            worst = worst.max(err);
            ensure(err <= 1e-6, || format!("n={n} {variant:?}: error {err:e}"))?;
        }
    }
    for k in 1..=500u64 {
        for at in [-1i64, 1] {
            let exact = cyclotomic_eval(k, at);
            let closed = BigInt::from(cyclotomic_closed_form(k, at));
            ensure(exact == closed, || format!("Phi_{k}({at}) = {exact}, closed form {closed}"))?;
        }
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("n in 3..=200 max error {worst:.1e}; Phi_k(+-1) exact for k <= 500"))
}

fn smith_form() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..500 {
        let (r, c) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let snf = smith_normal_form(&IntMatrix::from_rows(c, &rows), false);
        let ours: Vec<i64> = snf.diag.iter().take(snf.rank).map(|d| i64::try_from(d).unwrap()).collect();
        ensure(ours == invariant_factors_by_minors(&rows, c), || format!("{rows:?}: {ours:?}"))?;
        ensure(ours.windows(2).all(|w| w[1] % w[0] == 0), || format!("{ours:?} not a divisor chain"))?;
        ensure(ours.iter().all(|&d| d > 0), || format!("{ours:?} has a nonpositive factor"))?;
    }
    for _ in 0..500 {
        let gens = rng.gen_range(1..=4);
        let count = rng.gen_range(1..=8);
        let rels: Vec<Word> = (0..count)
            .map(|_| {
                let len = rng.gen_range(1..=6);
                Word::from_letters(
                    (0..len)
                        .map(|_| (rng.gen_range(0..gens), if rng.gen() { 1 } else { -1 }))
                        .collect(),
                )
            })
            .collect();
        let pres = GroupPresentation::new(gens, rels);
        let torsion = abelianization(&pres).torsion_order();
        let bound = hadamard_torsion_bound(&pres);
        ensure(torsion.magnitude() <= &bound, || format!("|Tor| = {torsion} > {bound}"))?;
    }
    within(start, Duration::from_secs(60))?;
    Ok("500 matrices agree with the minors oracle; 500 presentations within l^r".into())
}

fn orientability() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut cases: Vec<_> = manifest().iter().map(load_fixture).collect();
    let fixtures = cases.len();
    for _ in 0..200 {
        let t = rng.gen_range(1..=12);
        cases.push(random_connected_gluing(&mut rng, t));
    }
    let mut orientable = 0;
    for tri in &cases {
        let ours = orientation_check(tri).map_err(|e| e.to_string())?.orientable;
        ensure(ours == orientable_by_brute_force(tri), || format!("disagrees on\n{}", tri.to_text()))?;
        let mut relabel: Vec<usize> = (0..tri.size()).collect();
        relabel.shuffle(&mut rng);
        let other = orientation_check(&tri.relabeled(&relabel)).map_err(|e| e.to_string())?;
        ensure(other.orientable == ours, || "verdict changed under relabeling".into())?;
        orientable += ours as usize;
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!(
        "{fixtures} fixtures + 200 random tables agree with 2^t search ({orientable} orientable)"
    ))
}

fn presentation_bounds() -> Check {
    let start = Instant::now();
    let mut checked = 0;
    for entry in manifest() {
        let name = entry["name"].as_str().unwrap();
        let tri = load_fixture(&entry);
        let v = validate(&tri);
        if !v.pass || v.vertices != 1 {
            continue;
        }
        let t = v.tetrahedra;
        let pres = fundamental_group(&tri).map_err(|e| e.to_string())?;
        ensure(pres.generator_count() <= t + 1, || format!("{name}: {} generators", pres.generator_count()))?;
        ensure(pres.relators().len() <= 2 * t, || format!("{name}: {} relators", pres.relators().len()))?;
        ensure(pres.max_relator_length() <= 3, || format!("{name}: relator of length {}", pres.max_relator_length()))?;
        let h = abelianization(&pres);
        let expect = &entry["h1"];
        let torsion: Vec<BigInt> = expect["torsion"]
            .as_array()
            .unwrap()
            .iter()
            .map(|d| BigInt::from(d.as_i64().unwrap()))
            .collect();
        ensure(
            h.free_rank as u64 == expect["free_rank"].as_u64().unwrap() && h.torsion == torsion,
            || format!("{name}: H1 {h}, reference {}", expect["text"]),
        )?;
        checked += 1;
    }
    ensure(checked > 0, || "no 1-vertex fixtures".into())?;
    within(start, Duration::from_secs(10))?;
    Ok(format!("{checked} one-vertex fixtures within t+1 generators, 2t relators of length <= 3; H1 matches"))
}

fn non_hyperbolic() -> Check {
    let start = Instant::now();
    let mut triples = vec![(2, 3, 3), (2, 3, 4), (2, 3, 5), (2, 3, 6), (2, 4, 4), (3, 3, 3)];
    triples.extend((3..=99).step_by(2).map(|m| (2, 2, m)));
    let mut largest = (0u128, 0u64);
    for &(a, b, c) in &triples {
        let t = classify(a, b, c).map_err(|e| e.to_string())?;
        let cert = build_nonhyperbolic_cert(&t).map_err(|e| format!("({a},{b},{c}): {e}"))?;
        let report = Certificate::parse(&cert.to_text()).map_err(|e| e.to_string())?.verify();
        ensure(report.accepted, || format!("({a},{b},{c}): {:?}", report.failure))?;
        if let CertificateBody::NonAbelianRep { spec, .. } = &cert.body {
            let q = spec.order();
            ensure(q <= (c * c) as u128, || format!("({a},{b},{c}): |F| = {q} > {}", c * c))?;
            if q as f64 / (c * c) as f64 > largest.0 as f64 / largest.1.max(1).pow(2) as f64 {
                largest = (q, c);
            }
        }
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!(
        "{} triples verified; worst |F| / n3^2 = {} / {}",
        triples.len(),
        largest.0,
        largest.1 * largest.1
    ))
}

/// Every certificate that differs from `text` in exactly one field.
///
/// Fields: the modulus `p` and each target modulus (+-1), each matrix
/// coordinate (+-1 mod p), and each relator letter (replaced by every other
/// letter). Image vectors and witness words are not mutated: a different
/// valid image or another non-commuting pair is still a correct proof.
fn mutations(text: &str) -> Vec<(String, String)> {
    let lines: Vec<&str> = text.lines().collect();
    let names: Vec<String> = lines
        .iter()
        .find_map(|l| l.strip_prefix("gens "))
        .map(|l| l.split_whitespace().skip(1).map(str::to_owned).collect())
        .unwrap_or_default();
    let alphabet: Vec<String> = names.iter().flat_map(|n| [n.clone(), format!("{n}^-1")]).collect();
    let p: i64 = lines
        .iter()
        .find_map(|l| l.strip_prefix("field p="))
        .and_then(|l| l.split_whitespace().next())
        .map_or(0, |v| v.parse().unwrap());
    let mut out = Vec::new();
    let mut emit = |i: usize, new_line: String, what: String| {
        let mut copy: Vec<String> = lines.iter().map(|s| s.to_string()).collect();
        copy[i] = new_line;
        out.push((what, copy.join("\n") + "\n"));
    };
    for (i, line) in lines.iter().enumerate() {
        if let Some(rest) = line.strip_prefix("rel ") {
            let tokens: Vec<&str> = rest.split_whitespace().collect();
            for (k, tok) in tokens.iter().enumerate() {
                for other in alphabet.iter().filter(|a| a.as_str() != *tok) {
                    let mut t = tokens.clone();
                    t[k] = other;
                    emit(i, format!("rel {}", t.join(" ")), format!("line {i} letter {k} -> {other}"));
                }
            }
        } else if line.starts_with("field p=") {
            for d in [-1, 1] {
                emit(i, line.replacen(&format!("p={p}"), &format!("p={}", p + d), 1), format!("p{d:+}"));
            }
        } else if let Some(rest) = line.strip_prefix("target Z/") {
            let (a, b) = rest.split_once(" x Z/").unwrap();
            let (a, b): (i64, i64) = (a.parse().unwrap(), b.parse().unwrap());
            for d in [-1, 1] {
                emit(i, format!("target Z/{} x Z/{b}", a + d), format!("a{d:+}"));
                emit(i, format!("target Z/{a} x Z/{}", b + d), format!("b{d:+}"));
            }
        } else if line.starts_with("gen ") && line.contains("[[") {
            let (head, body) = line.split_once('=').unwrap();
            // spans of decimal integers in the matrix
            let bytes = body.as_bytes();
            let mut spans = Vec::new();
            let mut j = 0;
            while j < bytes.len() {
                if bytes[j].is_ascii_digit() {
                    let s = j;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    spans.push((s, j));
                } else {
                    j += 1;
                }
            }
            for (k, &(s, e)) in spans.iter().enumerate() {
                let v: i64 = body[s..e].parse().unwrap();
                for d in [-1, 1] {
                    let nv = (v + d).rem_euclid(p);
                    emit(
                        i,
                        format!("{head}={}{nv}{}", &body[..s], &body[e..]),
                        format!("line {i} coordinate {k} {d:+}"),
                    );
                }
            }
        }
    }
    out
}

/// Independent recheck with naive arithmetic: true when the certificate
/// proves what it claims.
fn naive_check(cert: &Certificate) -> bool {
    let pres = &cert.presentation;
    match &cert.body {
        CertificateBody::NonCyclicAbelian { target, images } => {
            let (a, b) = (i64::try_from(&target.0).unwrap(), i64::try_from(&target.1).unwrap());
            let imgs: Vec<(i64, i64)> = images
                .iter()
                .map(|(u, v)| (i64::try_from(u).unwrap(), i64::try_from(v).unwrap()))
                .collect();
            let kills = pres.relators().iter().all(|w| {
                let (mut u, mut v) = (0i64, 0i64);
                for &(g, e) in w.letters() {
                    u += e as i64 * imgs[g].0;
                    v += e as i64 * imgs[g].1;
                }
                u.rem_euclid(a) == 0 && v.rem_euclid(b) == 0
            });
            // closure of the images; cyclic iff some element's order equals its size
            let mut seen = std::collections::BTreeSet::from([(0i64, 0i64)]);
            let mut stack = vec![(0i64, 0i64)];
            while let Some((u, v)) = stack.pop() {
                for &(x, y) in &imgs {
                    let n = ((u + x).rem_euclid(a), (v + y).rem_euclid(b));
                    if seen.insert(n) {
                        stack.push(n);
                    }
                }
            }
            let order_of = |&(u, v): &(i64, i64)| {
                let mut k = 1;
                let (mut x, mut y) = (u, v);
                while (x, y) != (0, 0) {
                    x = (x + u).rem_euclid(a);
                    y = (y + v).rem_euclid(b);
                    k += 1;
                }
                k
            };
            kills && !seen.iter().any(|e| order_of(e) == seen.len())
        }
        CertificateBody::NonAbelianRep {
            spec,
            matrices,
            surjection,
            witness,
            ..
        } => {
            let p = spec.p() as u128;
            let s = spec.nonresidue().unwrap_or(0) as u128;
            type E = (u128, u128);
            let fmul = |x: E, y: E| ((x.0 * y.0 + s * (x.1 * y.1 % p)) % p, (x.0 * y.1 + x.1 * y.0) % p);
            let fadd = |x: E, y: E| ((x.0 + y.0) % p, (x.1 + y.1) % p);
            let fneg = |x: E| ((p - x.0) % p, (p - x.1) % p);
            type M = [E; 4];
            let mmul = |x: &M, y: &M| -> M {
                [
                    fadd(fmul(x[0], y[0]), fmul(x[1], y[2])),
                    fadd(fmul(x[0], y[1]), fmul(x[1], y[3])),
                    fadd(fmul(x[2], y[0]), fmul(x[3], y[2])),
                    fadd(fmul(x[2], y[1]), fmul(x[3], y[3])),
                ]
            };
            let mats: Vec<M> = matrices
                .iter()
                .map(|m| m.map(|e| (e.c0 as u128, e.c1 as u128)))
                .collect();
            if mats.iter().any(|m| fadd(fmul(m[0], m[3]), fneg(fmul(m[1], m[2]))) != (1, 0)) {
                return false;
            }
            let invs: Vec<M> = mats.iter().map(|m| [m[3], fneg(m[1]), fneg(m[2]), m[0]]).collect();
            let eval = |w: &Word| -> M {
                let w = match surjection {
                    Some(images) => w.substitute(images),
                    None => w.clone(),
                };
                let mut acc: M = [(1, 0), (0, 0), (0, 0), (1, 0)];
                for &(g, e) in w.letters() {
                    acc = mmul(&acc, if e > 0 { &mats[g] } else { &invs[g] });
                }
                acc
            };
            let is_pm_identity = |m: &M| {
                (m[1], m[2]) == ((0, 0), (0, 0)) && m[0] == m[3] && (m[0] == (1, 0) || m[0] == (p - 1, 0))
            };
            let same = |x: &M, y: &M| x == y || *x == y.map(fneg);
            pres.relators().iter().all(|w| is_pm_identity(&eval(w)))
                && (0..pres.generator_count()).any(|g| !is_pm_identity(&eval(&Word::generator(g))))
                && !same(&eval(&witness.0), &eval(&witness.1))
        }
    }
}

fn tamper() -> Check {
    let start = Instant::now();
    let t237 = classify(2, 3, 7).unwrap();
    let nonhyp = |a, b, c| build_nonhyperbolic_cert(&classify(a, b, c).unwrap()).unwrap().to_text();
    let sigma = {
        let tri = lenscert::Triangulation::parse(&fixture_text("sigma237.tri")).unwrap();
        let pres = fundamental_group(&tri).unwrap();
        let names = vec!["x".to_string(), "y".to_string()];
        let words = lenscert::certificate::parse_surjection(&fixture_text("sigma237.surj"), &pres, &names).unwrap();
        let options = lenscert::certificate::PipelineOptions {
            base: Some((2, 3, 7)),
            surjection: Some(words),
            ..Default::default()
        };
        lenscert::certificate::pipeline(&tri, &options).unwrap().certificate
    };
    ensure(sigma.level == Level::Triangulation, || "Sigma(2,3,7) certificate not triangulation level".into())?;
    let sources = [
        ("(3,3,3) abelian", nonhyp(3, 3, 3)),
        ("(2,3,7) over F_337", build_hyperbolic_rep(&t237, DEFAULT_PRIME_CEILING).unwrap().certificate().to_text()),
        ("(2,3,4) over F_7", nonhyp(2, 3, 4)),
        ("(2,2,15) over F_9", nonhyp(2, 2, 15)),
        ("figure-eight over F_25", fixture_text("fig8.cert")),
        ("Sigma(2,3,7) triangulation", sigma.to_text()),
    ];
    let mut summary = Vec::new();
    let (mut total, mut caught) = (0, 0);
    for (label, text) in &sources {
        let original = Certificate::parse(text).map_err(|e| e.to_string())?;
        ensure(original.verify().accepted && naive_check(&original), || format!("{label}: original rejected"))?;
        let (mut parse_errors, mut rejections, mut valid) = (0, 0, 0);
        let muts = mutations(text);
        for (what, mutated) in &muts {
            match Certificate::parse(mutated) {
                Err(_) => parse_errors += 1,
                Ok(c) => {
                    let accepted = c.verify().accepted;
                    let sound = naive_check(&c);
                    match (accepted, sound) {
                        (false, false) => rejections += 1,
                        (true, true) => valid += 1,
                        (true, false) => return Err(format!("{label}: `{what}` accepted but invalid")),
                        (false, true) => return Err(format!("{label}: `{what}` is valid but rejected")),
                    }
                }
            }
        }
        total += muts.len();
        caught += rejections + parse_errors;
        summary.push(format!("{label} {}/{rejections}/{parse_errors}/{valid}", muts.len()));
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!(
        "{total} mutants, 0 invalid accepted, {caught} rejected or unparsable ({:.1}%), the rest independently confirmed valid; per certificate total/rejected/unparsable/still-valid: {}",
        100.0 * caught as f64 / total as f64,
        summary.join(", ")
    ))
}

fn bounds() -> Check {
    let start = Instant::now();
    let t = classify(2, 3, 7).unwrap();
    let rep = build_hyperbolic_rep(&t, DEFAULT_PRIME_CEILING).map_err(|e| e.to_string())?;
    let r = bound_report(&t, Some(10), Some(&rep));
    let tb = r.tetrahedra.as_ref().ok_or("no tetrahedra bounds")?;
    let f = r.field.as_ref().ok_or("no field report")?;
    ensure(tb.ell_within, || format!("ell={} exceeds {}", r.ell, tb.ell_bound))?;
    ensure(f.below_ell10, || format!("|F| = {} not below ell^10", f.field_order))?;
    within(start, Duration::from_secs(1))?;
    Ok(format!(
        "ell={} <= 2^20 3^120; |F|={} with |F|/ell^10 = {:.3e}; p/ell^5.18 = {:.3e} (reported only)",
        r.ell, f.field_order, f.ratio_to_ell10, f.linnik_ratio
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("figure-eight worked example", figure_eight),
        ("hyperbolic triple sweep", triple_sweep),
        ("cosine norm and cyclotomic closed forms", cosine_norms),
        ("Smith normal form", smith_form),
        ("orientability", orientability),
        ("presentation bounds", presentation_bounds),
        ("non-hyperbolic coverage", non_hyperbolic),
        ("tamper soundness", tamper),
        ("bound report", bounds),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
