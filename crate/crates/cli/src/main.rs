use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use lenscert::certificate::{parse_surjection, pipeline, Level, PipelineError, PipelineOptions, Step};
use lenscert::galois::DEFAULT_PRIME_CEILING;
use lenscert::intlinalg::abelianization;
use lenscert::presentation::fundamental_group;
use lenscert::trianglerep::{
    bound_report, build_hyperbolic_rep, build_nonhyperbolic_cert, cert_case, classify, cosine_norm,
    cosine_norm_numeric, cyclotomic_closed_form, cyclotomic_eval, field_degree_report, hyperbolic_triples,
    EmbeddingVerdict, NormVariant, TriangleType,
};
use lenscert::triangulation::{orientation_check, validate};
use lenscert::{Certificate, Triangulation};

#[derive(Parser)]
#[command(name = "lenscert", version, about = "Certificates that a Seifert fibered 3-manifold is not a lens space")]
struct Cli {
    /// Emit one JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a triangulation is a closed, connected 3-manifold.
    Validate { tri: PathBuf },
    /// Decide orientability by propagating signs over the dual graph.
    Orient { tri: PathBuf },
    /// Print the fundamental group presentation read off the triangulation.
    Pi1 { tri: PathBuf },
    /// Print the first homology group.
    Homology { tri: PathBuf },
    /// Build and verify a certificate for the triangle group T(n1,n2,n3).
    Trianglecert {
        n1: u64,
        n2: u64,
        n3: u64,
        /// Certificate path [default: triangle_<n1>_<n2>_<n3>.cert]
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        ceiling: Ceiling,
    },
    /// Verify a certificate file.
    Verify { cert: PathBuf },
    /// Certify that a triangulated Seifert fibered space is not a lens space.
    Pipeline {
        tri: PathBuf,
        /// Base orbifold cone orders, e.g. 2,3,7
        #[arg(long, value_parser = parse_base)]
        base: Option<(u64, u64, u64)>,
        /// Images of the presentation's generators as words in x, y.
        #[arg(long)]
        surjection: Option<PathBuf>,
        /// Fail rather than emit an orbifold-level certificate.
        #[arg(long)]
        require_surjection: bool,
        /// Certificate path [default: the input path with extension .cert]
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        ceiling: Ceiling,
    },
    /// Build and verify every hyperbolic triple with entries up to max-n.
    Sweep {
        #[arg(long, default_value_t = 19)]
        max_n: u64,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Print one row per triple.
        #[arg(short, long)]
        verbose: bool,
        #[command(flatten)]
        ceiling: Ceiling,
    },
    /// Trace field and field of definition degrees for T(n1,n2,n3).
    DegreeReport { n1: u64, n2: u64, n3: u64 },
    /// Size bounds for T(n1,n2,n3), optionally against t tetrahedra.
    Bounds {
        n1: u64,
        n2: u64,
        n3: u64,
        #[arg(long)]
        tetrahedra: Option<u64>,
        #[command(flatten)]
        ceiling: Ceiling,
    },
    /// Compare closed forms of cosine norms and cyclotomic values against direct evaluation.
    Norms {
        #[arg(long, default_value_t = 200)]
        max_n: u64,
        #[arg(long, default_value_t = 500)]
        max_k: u64,
    },
}

#[derive(Args)]
struct Ceiling {
    /// Upper limit for the prime search.
    #[arg(long, default_value_t = DEFAULT_PRIME_CEILING, value_parser = clap::value_parser!(u64).range(1..))]
    ceiling: u64,
}

fn parse_base(s: &str) -> Result<(u64, u64, u64), String> {
    let parts: Vec<u64> = s
        .split(',')
        .map(|p| p.trim().parse::<u64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [a, b, c] => Ok((a, b, c)),
        _ => Err(format!("expected three comma-separated integers, got `{s}`")),
    }
}

/// Text lines, the JSON document, and the verdict.
struct Outcome {
    text: Vec<String>,
    json: Value,
    accepted: bool,
}

impl Outcome {
    fn new(accepted: bool, json: Value) -> Self {
        Outcome {
            text: Vec::new(),
            json,
            accepted,
        }
    }

    fn line(mut self, s: impl Into<String>) -> Self {
        self.text.push(s.into());
        self
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_triangulation(path: &Path) -> Result<Triangulation> {
    Triangulation::parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let name = path.file_name().ok_or_else(|| anyhow!("{} is not a file path", path.display()))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.with_context(|| format!("writing {}", path.display()))
}

fn cmd_validate(path: &Path) -> Result<Outcome> {
    let tri = read_triangulation(path)?;
    let r = validate(&tri);
    let links: Vec<String> = r.vertex_links.iter().map(|c| c.to_string()).collect();
    Ok(Outcome::new(r.pass, serde_json::to_value(&r)?)
        .line(format!(
            "tetrahedra={} vertices={} edges={} faces={} euler={}",
            r.tetrahedra, r.vertices, r.edges, r.faces, r.euler_characteristic
        ))
        .line(format!(
            "vertex_links={} invalid_edges={} connected={}",
            links.join(","),
            r.invalid_edges,
            yes(r.connected)
        ))
        .line(format!("closed_manifold={}", yes(r.pass))))
}

fn cmd_orient(path: &Path) -> Result<Outcome> {
    let tri = read_triangulation(path)?;
    let r = orientation_check(&tri)?;
    let mut out = Outcome::new(r.orientable, serde_json::to_value(&r)?).line(format!("orientable={}", yes(r.orientable)));
    if let Some(signs) = &r.assignment {
        let signs: Vec<&str> = signs.iter().map(|&s| if s > 0 { "+" } else { "-" }).collect();
        out = out.line(format!("signs={}", signs.join("")));
    }
    if let Some(w) = &r.witness {
        out = out.line(format!("witness={w}"));
    }
    Ok(out)
}

fn cmd_pi1(path: &Path) -> Result<Outcome> {
    let tri = read_triangulation(path)?;
    let pres = fundamental_group(&tri)?;
    let relators: Vec<String> = pres.relators().iter().map(|w| pres.word_text(w)).collect();
    let json = json!({
        "generators": pres.labels(),
        "relators": relators,
        "size": pres.size(),
    });
    let mut out = Outcome::new(true, json);
    out.text.extend(pres.to_text().lines().map(str::to_owned));
    Ok(out)
}

fn cmd_homology(path: &Path) -> Result<Outcome> {
    let tri = read_triangulation(path)?;
    let h = abelianization(&fundamental_group(&tri)?);
    let json = json!({
        "group": h.to_string(),
        "free_rank": h.free_rank,
        "torsion": h.torsion.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        "cyclic": h.is_cyclic(),
    });
    Ok(Outcome::new(true, json).line(format!("H1={h} cyclic={}", yes(h.is_cyclic()))))
}

fn cmd_trianglecert(n: (u64, u64, u64), output: Option<PathBuf>, ceiling: u64) -> Result<Outcome> {
    let t = classify(n.0, n.1, n.2)?;
    let path = output.unwrap_or_else(|| PathBuf::from(format!("triangle_{}_{}_{}.cert", n.0, n.1, n.2)));
    let case = cert_case(&t);
    let (cert, summary, json) = if t.is_hyperbolic_coprime() {
        let rep = build_hyperbolic_rep(&t, ceiling)?;
        let orders: Vec<String> = rep.checks.orders.iter().map(|o| o.to_string()).collect();
        let summary = format!(
            "p={} field_deg={} orders={} nonabelian={}",
            rep.prime.p,
            rep.spec.degree(),
            orders.join(","),
            yes(rep.checks.nonabelian)
        );
        let json = json!({
            "p": rep.prime.p,
            "field_degree": rep.spec.degree(),
            "orders": rep.checks.orders,
            "nonabelian": rep.checks.nonabelian,
            "quadratic_ok": rep.checks.quadratic_ok,
            "trace_ok": rep.checks.trace_ok,
            "linnik_ratio": rep.prime.linnik_ratio,
        });
        (rep.certificate(), summary, json)
    } else {
        let cert = build_nonhyperbolic_cert(&t)?;
        let summary = format!("case={case:?} kind={}", cert.kind());
        (cert, summary, json!({}))
    };
    let report = cert.verify();
    write_atomic(&path, &cert.to_text())?;
    let json = json!({
        "triangle": t,
        "case": case,
        "build": json,
        "certificate": path.display().to_string(),
        "report": report,
    });
    Ok(Outcome::new(report.accepted, json)
        .line(summary)
        .line(format!("verified={}", yes(report.accepted)))
        .line(format!("wrote {}", path.display())))
}

fn report_lines(r: &lenscert::VerificationReport) -> Vec<String> {
    let mut lines = vec![
        format!("accepted={}", yes(r.accepted)),
        format!("kind={} level={}", r.kind, r.level.as_str()),
        format!(
            "generators={} relators={} presentation_size={}",
            r.generators, r.relators, r.presentation_size
        ),
        format!(
            "mat_mults={} witness_mults={} field_ops={} abelian_ops={}",
            r.mat_mults, r.witness_mults, r.field_ops, r.abelian_ops
        ),
        format!("total_bits={}", r.total_bits),
    ];
    if let Some(f) = &r.failure {
        lines.push(format!("failure={f}"));
    }
    lines
}

fn cmd_verify(path: &Path) -> Result<Outcome> {
    let cert = Certificate::parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    let report = cert.verify();
    let mut out = Outcome::new(report.accepted, serde_json::to_value(&report)?);
    out.text = report_lines(&report);
    Ok(out)
}

struct PipelineArgs {
    tri: PathBuf,
    base: Option<(u64, u64, u64)>,
    surjection: Option<PathBuf>,
    require_surjection: bool,
    output: Option<PathBuf>,
    ceiling: u64,
}

fn cmd_pipeline(args: PipelineArgs) -> Result<Outcome> {
    let tri = read_triangulation(&args.tri)?;
    let surjection = match &args.surjection {
        None => None,
        Some(path) => {
            let pres = fundamental_group(&tri)?;
            let names = vec!["x".to_string(), "y".to_string()];
            Some(parse_surjection(&read(path)?, &pres, &names).with_context(|| format!("parsing {}", path.display()))?)
        }
    };
    let options = PipelineOptions {
        base: args.base,
        surjection,
        require_triangulation_level: args.require_surjection,
        prime_ceiling: args.ceiling,
    };
    let outcome = match pipeline(&tri, &options) {
        Ok(o) => o,
        Err(e @ (PipelineError::NotClosed | PipelineError::NonOrientable | PipelineError::SurjectionRejected(_))) => {
            let json = json!({ "accepted": false, "failure": e.to_string() });
            return Ok(Outcome::new(false, json).line(format!("rejected: {e}")));
        }
        Err(e) => return Err(e.into()),
    };
    let path = args.output.unwrap_or_else(|| args.tri.with_extension("cert"));
    write_atomic(&path, &outcome.certificate.to_text())?;
    let step = match outcome.step {
        Step::Homology => "homology",
        Step::TriangleGroup => "triangle-group",
    };
    let level = outcome.certificate.level;
    let mut out = Outcome::new(
        outcome.report.accepted,
        json!({
            "homology": outcome.homology.to_string(),
            "step": outcome.step,
            "triangle": outcome.triangle,
            "level": level,
            "certificate": path.display().to_string(),
            "report": outcome.report,
        }),
    )
    .line(format!("H1={} step={step}", outcome.homology));
    if let Some(t) = outcome.triangle {
        out = out.line(format!("base={},{},{} case={:?}", t.n[0], t.n[1], t.n[2], cert_case(&t)));
    }
    if level == Level::Orbifold {
        out = out.line("note: orbifold-level certificate; pass --surjection to tie it to the triangulation");
    }
    out.text.extend(report_lines(&outcome.report));
    Ok(out.line(format!("wrote {}", path.display())))
}

#[derive(serde::Serialize)]
struct SweepRow {
    n: [u64; 3],
    ell: u64,
    kind: String,
    p: Option<u64>,
    field_degree: u8,
    built: bool,
    verified: bool,
    embedding_witness: Option<u64>,
    failure: Option<String>,
}

fn sweep_one(t: &TriangleType, ceiling: u64) -> SweepRow {
    let witness = match field_degree_report(t).verdict {
        EmbeddingVerdict::Witness { l, .. } => Some(l),
        _ => None,
    };
    let mut row = SweepRow {
        n: t.n,
        ell: t.ell,
        kind: String::new(),
        p: None,
        field_degree: 0,
        built: false,
        verified: false,
        embedding_witness: witness,
        failure: None,
    };
    let cert = if t.is_hyperbolic_coprime() {
        match build_hyperbolic_rep(t, ceiling) {
            Ok(rep) => {
                row.p = Some(rep.prime.p);
                row.field_degree = rep.spec.degree();
                let c = &rep.checks;
                let orders_ok = c.orders.iter().zip(t.n).all(|(&o, n)| o == n as u128);
                if !(orders_ok && c.nonabelian && c.quadratic_ok && c.trace_ok) {
                    row.failure = Some(format!("checks failed: {c:?}"));
                }
                rep.certificate()
            }
            Err(e) => {
                row.failure = Some(e.to_string());
                return row;
            }
        }
    } else {
        match build_nonhyperbolic_cert(t) {
            Ok(c) => c,
            Err(e) => {
                row.failure = Some(e.to_string());
                return row;
            }
        }
    };
    row.built = true;
    row.kind = cert.kind().to_string();
    // verify the serialized form, not the in-memory one
    match Certificate::parse(&cert.to_text()) {
        Ok(parsed) => {
            let report = parsed.verify();
            row.verified = report.accepted && row.failure.is_none();
            if !report.accepted {
                row.failure = report.failure;
            }
        }
        Err(e) => row.failure = Some(e.to_string()),
    }
    row
}

fn cmd_sweep(max_n: u64, threads: usize, verbose: bool, ceiling: u64) -> Result<Outcome> {
    let triples = hyperbolic_triples(max_n);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    let rows: Vec<SweepRow> = pool.install(|| triples.par_iter().map(|t| sweep_one(t, ceiling)).collect());
    let built = rows.iter().filter(|r| r.built).count();
    let verified = rows.iter().filter(|r| r.verified).count();
    let failures = rows.len() - verified;
    let reps = rows.iter().filter(|r| r.p.is_some()).count();
    let witnesses = rows.iter().filter(|r| r.embedding_witness.is_some()).count();
    let summary = format!("{} triples, {built} built, {verified} verified, {failures} failures", rows.len());
    let mut out = Outcome::new(
        failures == 0,
        json!({
            "max_n": max_n,
            "triples": rows.len(),
            "built": built,
            "verified": verified,
            "failures": failures,
            "representations": reps,
            "abelian": built - reps,
            "embedding_witnesses": witnesses,
            "rows": rows,
        }),
    );
    if verbose {
        out = out.line(format!("{:>3} {:>3} {:>3} {:>8} {:>12} {:>3} {:<16} {:>8} {:>8}", "n1", "n2", "n3", "ell", "p", "deg", "kind", "verified", "witness"));
        for r in &rows {
            out = out.line(format!(
                "{:>3} {:>3} {:>3} {:>8} {:>12} {:>3} {:<16} {:>8} {:>8}",
                r.n[0],
                r.n[1],
                r.n[2],
                r.ell,
                r.p.map_or("-".into(), |p| p.to_string()),
                r.field_degree,
                r.kind,
                yes(r.verified),
                r.embedding_witness.map_or("-".into(), |l| l.to_string())
            ));
        }
    }
    for r in rows.iter().filter(|r| r.failure.is_some()) {
        out = out.line(format!("failed {:?}: {}", r.n, r.failure.as_deref().unwrap_or("")));
    }
    Ok(out
        .line(summary)
        .line(format!("{reps} representations, {} abelian certificates", built - reps))
        .line(format!("embedding witnesses: {witnesses}/{}", rows.len())))
}

fn verdict_text(v: &EmbeddingVerdict) -> String {
    match v {
        EmbeddingVerdict::Witness { l, value } => format!("witness l={l} value={value:.12}"),
        EmbeddingVerdict::AllReal => "all-real".into(),
        EmbeddingVerdict::Undetermined => "undetermined".into(),
    }
}

fn cmd_degree_report(n: (u64, u64, u64)) -> Result<Outcome> {
    let t = classify(n.0, n.1, n.2)?;
    let r = field_degree_report(&t);
    let definition = r.definition_degree.map_or("unknown".into(), |d| d.to_string());
    Ok(Outcome::new(true, serde_json::to_value(&r)?)
        .line(format!("ell={} trace_degree={} definition_degree={definition}", t.ell, r.trace_degree))
        .line(format!("embedding={}", verdict_text(&r.verdict)))
        .line(format!(
            "n1_variant={} disagree={}",
            verdict_text(&r.n1_variant),
            yes(r.variants_disagree)
        )))
}

fn cmd_bounds(n: (u64, u64, u64), tetrahedra: Option<u64>, ceiling: u64) -> Result<Outcome> {
    let t = classify(n.0, n.1, n.2)?;
    let rep = if t.is_hyperbolic_coprime() {
        Some(build_hyperbolic_rep(&t, ceiling)?)
    } else {
        None
    };
    let r = bound_report(&t, tetrahedra, rep.as_ref());
    let mut out = Outcome::new(true, serde_json::to_value(&r)?).line(format!("ell={} d={}", r.ell, r.d));
    if let Some(b) = &r.tetrahedra {
        out = out.line(format!(
            "t={} ell_within={} trace_degree_within={} field_bound_bits={}",
            b.t,
            yes(b.ell_within),
            yes(b.trace_degree_within),
            b.field_bound_bits
        ));
    }
    if let Some(f) = &r.field {
        out = out.line(format!(
            "p={} field_order={} ratio_to_ell10={:e} linnik_ratio={:e}",
            f.p, f.field_order, f.ratio_to_ell10, f.linnik_ratio
        ));
    }
    Ok(out)
}

fn cmd_norms(max_n: u64, max_k: u64) -> Result<Outcome> {
    let mut checked = 0u64;
    let mut mismatches = Vec::new();
    let mut max_err = 0f64;
    for n in 3..=max_n {
        for (variant, shift) in [(NormVariant::Plain, 0.0), (NormVariant::MinusTwo, 2.0)] {
            let closed = cosine_norm(n, variant)? as f64;
            let numeric = cosine_norm_numeric(n, shift);
            let err = (closed - numeric).abs();
            max_err = max_err.max(err);
            checked += 1;
            if err > 1e-6 {
                mismatches.push(format!("norm n={n} {variant:?}: closed {closed} numeric {numeric}"));
            }
        }
    }
    let mut cyclotomic = 0u64;
    for k in 1..=max_k {
        for at in [-1, 1] {
            cyclotomic += 1;
            let exact = cyclotomic_eval(k, at);
            let closed = cyclotomic_closed_form(k, at);
            if exact != closed.into() {
                mismatches.push(format!("Phi_{k}({at}): closed {closed} exact {exact}"));
            }
        }
    }
    let mut out = Outcome::new(
        mismatches.is_empty(),
        json!({
            "norms_checked": checked,
            "max_abs_error": max_err,
            "cyclotomic_checked": cyclotomic,
            "mismatches": mismatches,
        }),
    )
    .line(format!("cosine norms: {checked} checked, max error {max_err:e}"))
    .line(format!("cyclotomic values: {cyclotomic} checked"));
    for m in &mismatches {
        out = out.line(format!("mismatch {m}"));
    }
    Ok(out.line(format!("{} mismatches", mismatches.len())))
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Validate { tri } => cmd_validate(&tri),
        Command::Orient { tri } => cmd_orient(&tri),
        Command::Pi1 { tri } => cmd_pi1(&tri),
        Command::Homology { tri } => cmd_homology(&tri),
        Command::Trianglecert {
            n1,
            n2,
            n3,
            output,
            ceiling,
        } => cmd_trianglecert((n1, n2, n3), output, ceiling.ceiling),
        Command::Verify { cert } => cmd_verify(&cert),
        Command::Pipeline {
            tri,
            base,
            surjection,
            require_surjection,
            output,
            ceiling,
        } => cmd_pipeline(PipelineArgs {
            tri,
            base,
            surjection,
            require_surjection,
            output,
            ceiling: ceiling.ceiling,
        }),
        Command::Sweep {
            max_n,
            threads,
            verbose,
            ceiling,
        } => {
            if max_n < 2 {
                bail!("--max-n must be at least 2");
            }
            cmd_sweep(max_n, threads, verbose, ceiling.ceiling)
        }
        Command::DegreeReport { n1, n2, n3 } => cmd_degree_report((n1, n2, n3)),
        Command::Bounds {
            n1,
            n2,
            n3,
            tetrahedra,
            ceiling,
        } => cmd_bounds((n1, n2, n3), tetrahedra, ceiling.ceiling),
        Command::Norms { max_n, max_k } => cmd_norms(max_n, max_k),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let json = cli.json;
    match run(cli) {
        Ok(out) => {
            let mut text = String::new();
            if json {
                text.push_str(&serde_json::to_string_pretty(&out.json).expect("serializable"));
                text.push('\n');
            } else {
                for line in &out.text {
                    text.push_str(line);
                    text.push('\n');
                }
            }
            // a closed pipe downstream is not an error of ours
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(if out.accepted { 0 } else { 1 })
        }
        Err(e) => {
            if json {
                println!("{}", json!({ "error": format!("{e:#}") }));
            }
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
