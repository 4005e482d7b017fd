use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use tcubic_core::classify::{self, LineClass};
use tcubic_core::enumerator::{self, EnumeratorReport, EnumeratorSource, MuMethod, MuResult};
use tcubic_core::geometry::{Line3, Show};
use tcubic_core::golden::Golden;
use tcubic_core::Field;

#[derive(Parser)]
#[command(name = "tcubic", version, about = "Twisted cubic line classes, mu_q and coset leader weight enumerators")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    output_format: Format,
    /// Worker threads (default: all cores, or TCUBIC_THREADS).
    #[arg(long, env = "TCUBIC_THREADS", global = true)]
    threads: Option<usize>,
    /// Seed for sampled checks.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Golden value file (default: the bundled one).
    #[arg(long, global = true)]
    golden_path: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Brute,
    Formula,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Classify every plane, point and line of PG(3,q) and compare with the class sizes.
    Census {
        #[arg(long)]
        q: u64,
    },
    /// Class of one line, given as `a0,a1,a2,a3/b0,b1,b2,b3`.
    Classify {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        line: String,
    },
    /// The number of lines that are not real chords and lie in a 3-plane.
    Mu {
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// alpha_0..alpha_4 at T = q^m.
    Enumerator {
        #[arg(long)]
        q: u64,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        m: Vec<u32>,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        source: Method,
    },
    /// The rational function of a line with its divisors and double point polynomial.
    Ratfun {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        line: String,
    },
    /// Run every cross-check for one q.
    Verify {
        #[arg(long)]
        q: u64,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        m: Vec<u32>,
    },
    /// Print brute-force golden records for a list of q.
    Golden {
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<u64>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Census { .. } => "census",
            Command::Classify { .. } => "classify",
            Command::Mu { .. } => "mu",
            Command::Enumerator { .. } => "enumerator",
            Command::Ratfun { .. } => "ratfun",
            Command::Verify { .. } => "verify",
            Command::Golden { .. } => "golden",
        }
    }
}

/// A command result: JSON object, CSV table and text lines built from the same data.
struct Report {
    json: Map<String, Value>,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    text: Vec<String>,
    ok: bool,
}

impl Report {
    fn new(header: Vec<&'static str>) -> Report {
        Report { json: Map::new(), header, rows: Vec::new(), text: Vec::new(), ok: true }
    }

    fn set(&mut self, key: &str, v: Value) {
        self.json.insert(key.to_string(), v);
    }

    fn row(&mut self, r: Vec<String>) {
        self.rows.push(r);
    }
}

enum Failure {
    Usage(String),
    Other(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            e.print().ok();
            return ExitCode::from(code as u8);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: --threads: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    match run(&cli) {
        Ok(mut r) => {
            r.json.insert("command".into(), json!(cli.command.name()));
            r.json.insert("elapsed_ms".into(), json!(start.elapsed().as_millis() as u64));
            if let Err(e) = emit(&cli, &r) {
                eprintln!("error: {e:#}");
                return ExitCode::from(1);
            }
            ExitCode::from(if r.ok { 0 } else { 1 })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn emit(cli: &Cli, r: &Report) -> Result<()> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match cli.output_format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &Value::Object(r.json.clone()))?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&r.header)?;
            for row in &r.rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
        Format::Text => {
            for l in &r.text {
                writeln!(out, "{l}")?;
            }
        }
    }
    Ok(())
}

/// Field for geometry commands: a prime power with q >= 5.
fn field(q: u64) -> Result<Field, Failure> {
    let f = Field::new(q).map_err(|e| Failure::Usage(format!("--q {q}: {e}")))?;
    classify::require_q5(&f).map_err(|e| Failure::Usage(format!("--q {q}: {e}")))?;
    Ok(f)
}

fn parse_line(f: &Field, s: &str) -> Result<Line3, Failure> {
    let usage = |msg: String| Failure::Usage(format!("--line {s:?}: {msg}"));
    let rows: Vec<&str> = s.split('/').collect();
    if rows.len() != 2 {
        return Err(usage("expected two rows separated by '/'".into()));
    }
    let mut vecs = Vec::new();
    for r in rows {
        let parts: Vec<&str> = r.split(',').collect();
        if parts.len() != 4 {
            return Err(usage(format!("row {r:?} does not have four coordinates")));
        }
        let mut v = [tcubic_core::Fe::ZERO; 4];
        for (i, p) in parts.iter().enumerate() {
            v[i] = f.parse(p).map_err(|e| usage(e.to_string()))?;
        }
        vecs.push(v);
    }
    Line3::span(f, vecs[0], vecs[1]).map_err(|e| usage(e.to_string()))
}

fn golden(cli: &Cli) -> Result<Golden> {
    match &cli.golden_path {
        None => Ok(Golden::bundled()),
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Golden::parse(&text).map_err(|e| anyhow!("{}: {e}", p.display()))
        }
    }
}

fn mu_method(m: MuMethod) -> &'static str {
    match m {
        MuMethod::BruteForce => "brute_force",
        MuMethod::ClosedForm => "closed_form",
    }
}

fn source_name(s: EnumeratorSource) -> &'static str {
    match s {
        EnumeratorSource::BruteForce => "brute_force",
        EnumeratorSource::Formula(MuMethod::BruteForce) => "formula_with_brute_force_mu",
        EnumeratorSource::Formula(MuMethod::ClosedForm) => "formula_with_closed_form_mu",
    }
}

fn mu_json(r: &MuResult) -> Value {
    json!({ "mu": r.mu, "method": mu_method(r.method), "valid": r.valid })
}

fn alpha_json(r: &EnumeratorReport) -> Value {
    json!({ "m": r.m, "source": source_name(r.source), "alpha": r.alpha })
}

fn counts_json<K: std::fmt::Display>(m: &BTreeMap<K, u64>) -> Value {
    Value::Object(m.iter().map(|(k, v)| (k.to_string(), json!(v))).collect())
}

fn check(rep: &mut Report, checks: &mut Vec<Value>, name: &str, pass: bool, detail: String) {
    rep.ok &= pass;
    rep.text.push(format!("check {name}: {} {detail}", if pass { "PASS" } else { "FAIL" }).trim_end().to_string());
    checks.push(json!({ "name": name, "pass": pass, "detail": detail }));
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Census { q } => census(*q),
        Command::Classify { q, line } => classify_cmd(*q, line, false),
        Command::Ratfun { q, line } => classify_cmd(*q, line, true),
        Command::Mu { q, method } => mu(*q, *method),
        Command::Enumerator { q, m, source } => enumerator_cmd(*q, m, *source),
        Command::Verify { q, m } => verify(cli, *q, m),
        Command::Golden { q } => golden_cmd(q),
    }
}

fn census(q: u64) -> Result<Report, Failure> {
    let f = field(q)?;
    let c = classify::class_census(&f).map_err(anyhow::Error::from)?;
    let mut rep = Report::new(vec!["kind", "class", "count", "expected"]);
    rep.set("q", json!(q));
    let mut expected = Map::new();
    let mut checks = Vec::new();
    rep.text.push(format!("q = {q}"));
    for cl in LineClass::present(&f) {
        let got = c.lines.get(&cl).copied().unwrap_or(0);
        let want = cl.expected_size(q);
        expected.insert(cl.name().into(), json!(want));
        rep.row(vec!["line".into(), cl.name().into(), got.to_string(), want.to_string()]);
        rep.text.push(format!("line  {:<8} {got:>10} (expected {want})", cl.name()));
    }
    for pc in classify::PlaneClass::ALL {
        let got = c.planes.get(&pc).copied().unwrap_or(0);
        let want = pc.expected_size(q);
        rep.row(vec!["plane".into(), pc.to_string(), got.to_string(), want.to_string()]);
        rep.text.push(format!("plane {:<8} {got:>10} (expected {want})", pc.to_string()));
    }
    for pc in classify::PointClass::ALL {
        let got = c.points.get(&pc).copied().unwrap_or(0);
        let want = pc.expected_size(&f);
        rep.row(vec!["point".into(), pc.to_string(), got.to_string(), want.to_string()]);
        rep.text.push(format!("point {:<8} {got:>10} (expected {want})", pc.to_string()));
    }
    for (shape, n) in &c.o6_shapes {
        rep.text.push(format!("O6 ramification shape {shape}: {n}"));
    }
    let lines_ok = LineClass::ALL.iter().all(|cl| {
        c.lines.get(cl).copied().unwrap_or(0) == if cl.occurs(f.p()) { cl.expected_size(q) } else { 0 }
    });
    let planes_ok = classify::PlaneClass::ALL.iter().all(|pc| c.planes.get(pc).copied().unwrap_or(0) == pc.expected_size(q));
    let points_ok = classify::PointClass::ALL.iter().all(|pc| c.points.get(pc).copied().unwrap_or(0) == pc.expected_size(&f));
    check(&mut rep, &mut checks, "line_sizes", lines_ok, String::new());
    check(&mut rep, &mut checks, "plane_sizes", planes_ok, String::new());
    check(&mut rep, &mut checks, "point_sizes", points_ok, String::new());
    let lines: Map<String, Value> = c.lines.iter().map(|(k, v)| (k.name().to_string(), json!(v))).collect();
    let hits: Map<String, Value> = c.in_three_planes.iter().map(|(k, v)| (k.name().to_string(), json!(v))).collect();
    rep.set(
        "census",
        json!({
            "lines": lines,
            "expected_lines": expected,
            "planes": counts_json(&c.planes),
            "points": counts_json(&c.points),
            "lines_in_three_planes": hits,
            "o6_ramification_shapes": c.o6_shapes,
        }),
    );
    rep.set("checks", Value::Array(checks));
    Ok(rep)
}

fn classify_cmd(q: u64, line: &str, full: bool) -> Result<Report, Failure> {
    let f = field(q)?;
    let l = parse_line(&f, line)?;
    let a = classify::analyze_line(&f, &l);
    let mut rep = Report::new(vec!["key", "value"]);
    let mut fields: Vec<(&str, String)> = vec![
        ("line", Show(&f, &l).to_string()),
        ("class", a.class.name().to_string()),
        ("phi", a.phi.show(&f)),
    ];
    if full {
        let show = |d: &Option<tcubic_core::ratfun::Divisor>| match d {
            Some(d) => d.show(&f),
            None => "purely inseparable".into(),
        };
        fields.push(("base_divisor", a.base.show(&f)));
        fields.push(("morphism", a.morphism.show(&f)));
        fields.push(("ramification_divisor", show(&a.ramification)));
        fields.push(("different_divisor", show(&a.different)));
        fields.push(("double_point_polynomial", a.phi.double_point_polynomial(&f).show(&f)));
        fields.push(("permutation", a.morphism.is_permutation(&f).to_string()));
        fields.push(("in_three_plane", classify::in_three_plane(&f, &l).to_string()));
    }
    rep.set("q", json!(q));
    for (k, v) in fields {
        rep.text.push(format!("{k}: {v}"));
        rep.row(vec![k.to_string(), v.clone()]);
        rep.set(k, json!(v));
    }
    Ok(rep)
}

fn mu(q: u64, method: Method) -> Result<Report, Failure> {
    let f = field(q)?;
    let mut rep = Report::new(vec!["q", "method", "mu", "valid"]);
    rep.set("q", json!(q));
    let mut results = Vec::new();
    if method != Method::Formula {
        results.push(enumerator::mu_bruteforce(&f).map_err(anyhow::Error::from)?);
    }
    if method != Method::Brute {
        results.push(enumerator::mu_formula(f.q()));
    }
    let mut checks = Vec::new();
    for r in &results {
        rep.row(vec![q.to_string(), mu_method(r.method).into(), r.mu.to_string(), r.valid.to_string()]);
        let note = if r.valid { "" } else { " (closed form not proved for this q)" };
        rep.text.push(format!("mu = {} [{}]{note}", r.mu, mu_method(r.method)));
    }
    if let [b, c] = results.as_slice() {
        if c.valid {
            check(&mut rep, &mut checks, "mu_formula", b.mu == c.mu, format!("{} vs {}", b.mu, c.mu));
        }
    }
    rep.set("mu", Value::Array(results.iter().map(mu_json).collect()));
    rep.set("checks", Value::Array(checks));
    Ok(rep)
}

fn enumerator_cmd(q: u64, ms: &[u32], source: Method) -> Result<Report, Failure> {
    let f = field(q)?;
    if let Some(m) = ms.iter().find(|&&m| m == 0) {
        return Err(Failure::Usage(format!("--m {m}: extension degree must be positive")));
    }
    let mut rep = Report::new(vec!["q", "m", "source", "i", "alpha"]);
    rep.set("q", json!(q));
    rep.set("m", json!(ms));
    let mu = enumerator::mu_bruteforce(&f).map_err(anyhow::Error::from)?;
    rep.set("mu", mu_json(&mu));
    rep.text.push(format!("q = {q}, mu_q = {} (brute force)", mu.mu));
    let polys = enumerator::a_polynomials(q, mu.mu).map_err(anyhow::Error::from)?;
    for i in 1..=4 {
        rep.text.push(format!("a_{i}(T) = {}", polys.a[i]));
    }
    rep.set(
        "a",
        Value::Object((1..=4).map(|i| (format!("a_{i}"), json!(polys.a[i].to_string()))).collect()),
    );
    let mut alpha = Vec::new();
    let mut checks = Vec::new();
    let mut skipped = Vec::new();
    for &m in ms {
        let mut got = Vec::new();
        if source != Method::Formula {
            match enumerator::coset_enumerator_bruteforce(&f, m) {
                Ok(r) => got.push(r),
                Err(e) if source == Method::Both => {
                    rep.text.push(format!("m = {m}: brute force skipped: {e}"));
                    skipped.push(json!({ "m": m, "source": "brute_force", "reason": e.to_string() }));
                }
                Err(e) => return Err(Failure::Other(e.into())),
            }
        }
        if source != Method::Brute {
            got.push(enumerator::formula_report(f.q(), m, &mu).map_err(anyhow::Error::from)?);
        }
        for r in &got {
            rep.text.push(format!("m = {m} [{}]: alpha = ({})", source_name(r.source), r.alpha.join(", ")));
            for (i, a) in r.alpha.iter().enumerate() {
                rep.row(vec![q.to_string(), m.to_string(), source_name(r.source).into(), i.to_string(), a.clone()]);
            }
            alpha.push(alpha_json(r));
        }
        if let [b, c] = got.as_slice() {
            check(&mut rep, &mut checks, &format!("alpha_m{m}"), b.alpha == c.alpha, String::new());
        }
    }
    rep.set("alpha", Value::Array(alpha));
    if !skipped.is_empty() {
        rep.set("skipped", Value::Array(skipped));
    }
    rep.set("checks", Value::Array(checks));
    Ok(rep)
}

fn verify(cli: &Cli, q: u64, ms: &[u32]) -> Result<Report, Failure> {
    let f = field(q)?;
    let r = enumerator::verify(&f, ms, cli.seed).map_err(anyhow::Error::from)?;
    let g = golden(cli)?;
    let mut rep = Report::new(vec!["name", "pass", "skipped", "detail"]);
    rep.set("q", json!(q));
    rep.set("m", json!(ms));
    let mut checks = Vec::new();
    for c in &r.checks {
        rep.ok &= c.pass;
        let status = if c.skipped { "SKIP" } else if c.pass { "PASS" } else { "FAIL" };
        rep.text.push(format!("check {}: {status} {}", c.name, c.detail).trim_end().to_string());
        rep.row(vec![c.name.clone(), c.pass.to_string(), c.skipped.to_string(), c.detail.clone()]);
        checks.push(json!({ "name": c.name, "pass": c.pass, "skipped": c.skipped, "detail": c.detail }));
    }
    if let Some(want) = g.get(q, "mu") {
        let got = enumerator::mu_bruteforce(&f).map_err(anyhow::Error::from)?.mu;
        let pass = want.to_string() == got.to_string();
        rep.ok &= pass;
        let detail = format!("brute {got} golden {want}");
        rep.text.push(format!("check golden_mu: {} {detail}", if pass { "PASS" } else { "FAIL" }));
        rep.row(vec!["golden_mu".into(), pass.to_string(), "false".into(), detail.clone()]);
        checks.push(json!({ "name": "golden_mu", "pass": pass, "skipped": false, "detail": detail }));
    }
    rep.set("checks", Value::Array(checks));
    rep.text.push(if rep.ok { "all checks passed".into() } else { "some checks failed".into() });
    Ok(rep)
}

fn golden_cmd(qs: &[u64]) -> Result<Report, Failure> {
    let mut g = Golden::default();
    for &q in qs {
        let f = field(q)?;
        g.insert(q, "mu", enumerator::mu_bruteforce(&f).map_err(anyhow::Error::from)?.mu);
        for m in [1u32, 2] {
            if let Ok(r) = enumerator::coset_enumerator_bruteforce(&f, m) {
                for (i, v) in r.values().into_iter().enumerate() {
                    g.insert(q, &format!("alpha_m{m}_{i}"), v);
                }
            }
        }
    }
    let mut rep = Report::new(vec!["q", "key", "value"]);
    let mut records = Vec::new();
    for ((q, key), v) in &g.0 {
        rep.row(vec![q.to_string(), key.clone(), v.to_string()]);
        records.push(json!({ "q": q, "key": key, "value": v.to_string() }));
    }
    rep.text = g.render().lines().map(str::to_string).collect();
    rep.set("records", Value::Array(records));
    Ok(rep)
}
