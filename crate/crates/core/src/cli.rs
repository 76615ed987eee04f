//! Command-line front end. [`run`] is the whole program; `main` only wires
//! it to the process streams.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::catalog::{catalog, fiber_sum, lookup, validate_entry, CatalogEntry};
use crate::checks::{
    any_failure, render_text, run_checks, CheckResult, GroundTruthFlags, InvariantFacts, Selection, Tristate,
};
use crate::error::{CatalogError, InvariantError};
use crate::fibration::{counts, verify_closure, ClosureVerdict, Factorization, CONVENTION};
use crate::format::{self, Format, SourceDocument};
use crate::invariants::{compute_report, euler_number, InvariantReport};
use crate::meyer::calibrate;
use crate::search::{budget_from_env, search_with_budget, SearchSpec};
use crate::surface::{Curve, HomologyClass};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const CHECK_FAILED: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const PRECONDITION: i32 = 3;
    pub const BUDGET: i32 = 4;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "lefschetz",
    version,
    about = "Invariants and inequality audits for Lefschetz fibrations"
)]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a factorization, test closure and print its invariants.
    Invariants { file: PathBuf },
    /// Invariants plus every applicable inequality check.
    Check {
        file: PathBuf,
        /// not-rational-ruled | rational-or-ruled | unknown | ruled-base-genus=H |
        /// blowup-of-sphere-bundle | not-blowup-of-sphere-bundle (repeatable or comma-separated).
        #[arg(long, value_delimiter = ',')]
        assume: Vec<String>,
        /// all | core | info | comma-separated check ids.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Signature of the total space, for bases of positive genus.
        #[arg(long, allow_hyphen_values = true)]
        sigma: Option<i64>,
        /// c1^2 of the total space, for bases of positive genus.
        #[arg(long, allow_hyphen_values = true)]
        c1_squared: Option<i64>,
    },
    /// Built-in anchor examples.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Concatenate two closed words over the sphere.
    Fibersum {
        f1: PathBuf,
        f2: PathBuf,
        /// Output file; `.json` selects JSON, anything else the DSL.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Enumerate short positive words over a generator set.
    Search {
        #[arg(long)]
        genus: usize,
        /// `name=x1,...,x2g` or `name=sep:k`, separated by `;`.
        #[arg(long)]
        curves: String,
        #[arg(long)]
        max_len: usize,
        /// List every word with its verdict, not only closed ones.
        #[arg(long)]
        all: bool,
        #[arg(long)]
        workers: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    List,
    Show {
        name: String,
    },
    /// Validate every entry; `--attach NAME=FILE` supplies a word.
    Verify {
        #[arg(long)]
        attach: Vec<String>,
    },
    /// Write an entry's embedded document unchanged.
    Export {
        name: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// A failure already rendered for the error stream.
struct Failure {
    code: i32,
    lines: Vec<String>,
}

impl Failure {
    fn new(code: i32, msg: impl Into<String>) -> Self {
        Failure {
            code,
            lines: vec![msg.into()],
        }
    }
}

type Outcome = Result<i32, Failure>;

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    format: OutputFormat,
}

impl Io<'_> {
    fn print(&mut self, s: &str) {
        let _ = self.out.write_all(s.as_bytes());
    }

    fn json<T: Serialize>(&mut self, v: &T) {
        let mut s = serde_json::to_string_pretty(v).expect("serializable");
        s.push('\n');
        self.print(&s);
    }

    fn warn(&mut self, s: &str) {
        let _ = writeln!(self.err, "{s}");
    }
}

/// Runs one invocation and returns its exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::INPUT } else { exit::OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let mut io = Io {
        out,
        err,
        format: cli.format,
    };
    let result = match cli.command {
        Command::Invariants { file } => cmd_invariants(&mut io, &file),
        Command::Check {
            file,
            assume,
            suite,
            sigma,
            c1_squared,
        } => cmd_check(&mut io, &file, &assume, &suite, sigma, c1_squared),
        Command::Catalog { action } => cmd_catalog(&mut io, action),
        Command::Fibersum { f1, f2, output } => cmd_fibersum(&mut io, &f1, &f2, &output),
        Command::Search {
            genus,
            curves,
            max_len,
            all,
            workers,
        } => cmd_search(&mut io, genus, &curves, max_len, all, workers),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            for l in f.lines {
                let _ = writeln!(io.err, "error: {l}");
            }
            f.code
        }
    }
}

fn load(io: &mut Io, path: &Path) -> Result<Factorization, Failure> {
    let shown = path.display().to_string();
    let bytes = std::fs::read(path).map_err(|e| Failure::new(exit::INPUT, format!("{shown}: {e}")))?;
    let doc = SourceDocument::from_bytes(shown.clone(), &bytes)
        .map_err(|d| Failure::new(exit::INPUT, format!("{shown}:{d}")))?;
    match format::parse(&doc) {
        Ok(p) => {
            for w in &p.warnings {
                io.warn(&format!("{shown}:{w}"));
            }
            Ok(p.factorization)
        }
        Err(diags) => Err(Failure {
            code: exit::INPUT,
            lines: diags.iter().map(|d| format!("{shown}:{d}")).collect(),
        }),
    }
}

fn invariant_failure(e: InvariantError) -> Failure {
    Failure::new(exit::PRECONDITION, e.to_string())
}

fn ensure_calibrated() -> Result<(), Failure> {
    calibrate()
        .map(|_| ())
        .map_err(|e| Failure::new(exit::PRECONDITION, e.to_string()))
}

/// Counts and Euler number, which need neither closure nor a sphere base.
#[derive(Debug, Serialize)]
struct PartialReport {
    l: usize,
    n: usize,
    s: usize,
    e: i64,
    closure: ClosureVerdict,
    convention: &'static str,
}

fn partial_report(f: &Factorization) -> PartialReport {
    let c = counts(f);
    PartialReport {
        l: c.l,
        n: c.n,
        s: c.s,
        e: euler_number(f.fiber_genus().get(), f.base_genus(), c.l),
        closure: verify_closure(f),
        convention: CONVENTION,
    }
}

fn report_text(name: &str, r: &InvariantReport) -> String {
    let torsion: Vec<String> = r.torsion.iter().map(ToString::to_string).collect();
    let mut s = String::new();
    let _ = writeln!(s, "name: {name}");
    let _ = writeln!(s, "closure: {}", r.closure);
    for (k, v) in [
        ("l", r.l as i64),
        ("n", r.n as i64),
        ("s", r.s as i64),
        ("e", r.e),
        ("b1", r.b1 as i64),
    ] {
        let _ = writeln!(s, "{k}: {v}");
    }
    let _ = writeln!(s, "torsion: [{}]", torsion.join(","));
    for (k, v) in [
        ("b2", r.b2),
        ("b_plus", r.b_plus),
        ("b_minus", r.b_minus),
        ("sigma", r.sigma),
        ("c1_squared", r.c1_squared),
    ] {
        let _ = writeln!(s, "{k}: {v}");
    }
    let _ = writeln!(s, "hodge_pairing: {}", r.hodge_pairing);
    s
}

fn partial_text(name: &str, p: &PartialReport) -> String {
    format!(
        "name: {name}\nclosure: {}\nl: {}\nn: {}\ns: {}\ne: {}\n",
        p.closure, p.l, p.n, p.s, p.e
    )
}

/// Full report, or the partial one plus the reason the rest is missing.
fn report_or_partial(f: &Factorization) -> Result<Result<InvariantReport, (PartialReport, String)>, Failure> {
    if f.base_genus() > 0 {
        return Ok(Err((
            partial_report(f),
            format!(
                "signature and Betti numbers are computed over the sphere only (base genus {})",
                f.base_genus()
            ),
        )));
    }
    let verdict = verify_closure(f);
    if verdict != ClosureVerdict::Closed {
        return Ok(Err((
            partial_report(f),
            format!("monodromy is {verdict}; invariants beyond l, n, s, e need a closed word"),
        )));
    }
    ensure_calibrated()?;
    compute_report(f).map(Ok).map_err(invariant_failure)
}

fn cmd_invariants(io: &mut Io, path: &Path) -> Outcome {
    let f = load(io, path)?;
    match report_or_partial(&f)? {
        Ok(r) => {
            match io.format {
                OutputFormat::Text => io.print(&report_text(f.name(), &r)),
                OutputFormat::Json => io.json(&r),
            }
            Ok(exit::OK)
        }
        Err((p, why)) => {
            match io.format {
                OutputFormat::Text => io.print(&partial_text(f.name(), &p)),
                OutputFormat::Json => io.json(&p),
            }
            Err(Failure::new(exit::PRECONDITION, why))
        }
    }
}

fn apply_assumptions(flags: &mut GroundTruthFlags, assume: &[String]) -> Result<(), Failure> {
    for a in assume.iter().map(|s| s.trim()).filter(|s| !s.is_empty()) {
        match a {
            "rational-or-ruled" => flags.rational_or_ruled = Tristate::True,
            "not-rational-ruled" => {
                flags.rational_or_ruled = Tristate::False;
                flags.ruled_base_genus = None;
            }
            "unknown" => *flags = GroundTruthFlags::default(),
            "blowup-of-sphere-bundle" => flags.blowup_of_sphere_bundle = Tristate::True,
            "not-blowup-of-sphere-bundle" => flags.blowup_of_sphere_bundle = Tristate::False,
            other => match other.strip_prefix("ruled-base-genus=") {
                Some(h) => {
                    let h = h
                        .parse()
                        .map_err(|_| Failure::new(exit::INPUT, format!("--assume {other}: not a genus")))?;
                    flags.ruled_base_genus = Some(h);
                    flags.rational_or_ruled = Tristate::True;
                }
                None => return Err(Failure::new(exit::INPUT, format!("unknown assumption '{other}'"))),
            },
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct CheckOutput<'a, R: Serialize> {
    name: &'a str,
    report: R,
    checks: &'a [CheckResult],
}

fn cmd_check(
    io: &mut Io,
    path: &Path,
    assume: &[String],
    suite: &str,
    sigma: Option<i64>,
    c1_squared: Option<i64>,
) -> Outcome {
    let selection: Selection = suite
        .parse()
        .map_err(|e| Failure::new(exit::INPUT, format!("--suite: {e}")))?;
    let f = load(io, path)?;
    let mut flags = f.flags().clone();
    apply_assumptions(&mut flags, assume)?;
    let (g, h) = (f.fiber_genus().get(), f.base_genus());

    let (facts, report_json, report_txt) = match report_or_partial(&f)? {
        Ok(r) => {
            if sigma.is_some_and(|s| s != r.sigma) || c1_squared.is_some_and(|c| c != r.c1_squared) {
                return Err(Failure::new(
                    exit::INPUT,
                    format!(
                        "supplied invariants disagree with the computed ones (sigma {}, c1^2 {})",
                        r.sigma, r.c1_squared
                    ),
                ));
            }
            (
                InvariantFacts::from(&r),
                serde_json::to_value(&r),
                report_text(f.name(), &r),
            )
        }
        Err((p, why)) => {
            if h == 0 {
                // an open word has no total space to audit
                return Err(Failure::new(exit::PRECONDITION, why));
            }
            let facts = InvariantFacts {
                l: Some(p.l as i64),
                n: Some(p.n as i64),
                s: Some(p.s as i64),
                e: Some(p.e),
                sigma,
                c1_squared,
                ..Default::default()
            }
            .completed(g, h);
            (facts, serde_json::to_value(&p), partial_text(f.name(), &p))
        }
    };
    let results =
        run_checks(&facts, g, h, &flags, &selection).map_err(|e| Failure::new(exit::PRECONDITION, e.to_string()))?;
    match io.format {
        OutputFormat::Text => {
            io.print(&report_txt);
            io.print(&render_text(&results));
        }
        OutputFormat::Json => io.json(&CheckOutput {
            name: f.name(),
            report: report_json.expect("serializable"),
            checks: &results,
        }),
    }
    Ok(if any_failure(&results) {
        exit::CHECK_FAILED
    } else {
        exit::OK
    })
}

fn entry_json(e: &CatalogEntry) -> serde_json::Value {
    json!({
        "name": e.name,
        "fiber_genus": e.fiber_genus,
        "base_genus": e.base_genus,
        "word": e.factorization.as_ref().map(|f| f.word().to_vec()),
        "flags": e.flags,
        "expected": e.expected,
    })
}

fn cmd_catalog(io: &mut Io, action: CatalogAction) -> Outcome {
    let not_found = |e: CatalogError| Failure::new(exit::INPUT, e.to_string());
    match action {
        CatalogAction::List => {
            match io.format {
                OutputFormat::Text => {
                    let mut s = String::new();
                    for e in catalog() {
                        let word = e.factorization.as_ref().map_or("invariants only".to_string(), |f| {
                            format!("word of length {}", f.word().len())
                        });
                        let _ = writeln!(s, "{:<14} g={} h={} {word}", e.name, e.fiber_genus, e.base_genus);
                    }
                    io.print(&s);
                }
                OutputFormat::Json => {
                    let v: Vec<_> = catalog().iter().map(entry_json).collect();
                    io.json(&v);
                }
            }
            Ok(exit::OK)
        }
        CatalogAction::Show { name } => {
            let e = lookup(&name).map_err(not_found)?;
            match io.format {
                OutputFormat::Text => {
                    let mut s = format!(
                        "name: {}\nfiber_genus: {}\nbase_genus: {}\n",
                        e.name, e.fiber_genus, e.base_genus
                    );
                    if let Some(f) = &e.factorization {
                        let _ = writeln!(s, "word: {}", f.word().join(" "));
                    }
                    let fl = &e.flags;
                    let _ = writeln!(s, "rational_or_ruled: {}", fl.rational_or_ruled);
                    if let Some(hr) = fl.ruled_base_genus {
                        let _ = writeln!(s, "ruling_base_genus: {hr}");
                    }
                    let _ = writeln!(s, "blowup_of_sphere_bundle: {}", fl.blowup_of_sphere_bundle);
                    if let Some(m) = &fl.known_manifold {
                        let _ = writeln!(s, "known_manifold: {m}");
                    }
                    s.push_str("expected:\n");
                    for x in &e.expected {
                        let kind = match x.provenance.kind {
                            crate::catalog::ProvenanceKind::Anchor => "anchor",
                            crate::catalog::ProvenanceKind::Derived => "derived",
                        };
                        let _ = writeln!(s, "  {} = {} ({kind}: {})", x.key, x.value, x.provenance.source);
                    }
                    io.print(&s);
                }
                OutputFormat::Json => io.json(&entry_json(e)),
            }
            Ok(exit::OK)
        }
        CatalogAction::Verify { attach } => {
            let mut entries: Vec<CatalogEntry> = catalog().to_vec();
            for a in &attach {
                let (name, file) = a
                    .split_once('=')
                    .ok_or_else(|| Failure::new(exit::INPUT, format!("--attach {a}: expected NAME=FILE")))?;
                let f = load(io, Path::new(file))?;
                let slot = entries
                    .iter_mut()
                    .find(|e| e.name == name)
                    .ok_or_else(|| not_found(CatalogError::NotFound(name.into())))?;
                *slot = slot
                    .with_factorization(f)
                    .map_err(|e| Failure::new(exit::INPUT, e.to_string()))?;
            }
            ensure_calibrated()?;
            let results: Vec<_> = entries.iter().map(|e| (e, validate_entry(e))).collect();
            let failed = results.iter().any(|(_, d)| !d.is_empty());
            match io.format {
                OutputFormat::Text => {
                    let mut s = String::new();
                    for (e, d) in &results {
                        if d.is_empty() {
                            let _ = writeln!(s, "OK {}", e.name);
                        } else {
                            let msgs: Vec<String> = d.iter().map(ToString::to_string).collect();
                            let _ = writeln!(s, "FAIL {}: {}", e.name, msgs.join("; "));
                        }
                    }
                    io.print(&s);
                }
                OutputFormat::Json => {
                    let v: Vec<_> = results
                        .iter()
                        .map(|(e, d)| json!({"name": e.name, "ok": d.is_empty(), "discrepancies": d}))
                        .collect();
                    io.json(&v);
                }
            }
            Ok(if failed { exit::CHECK_FAILED } else { exit::OK })
        }
        CatalogAction::Export { name, output } => {
            let e = lookup(&name).map_err(not_found)?;
            match output {
                Some(p) => std::fs::write(&p, e.source)
                    .map_err(|err| Failure::new(exit::INPUT, format!("{}: {err}", p.display())))?,
                None => io.print(e.source),
            }
            Ok(exit::OK)
        }
    }
}

fn cmd_fibersum(io: &mut Io, p1: &Path, p2: &Path, output: &Path) -> Outcome {
    let f1 = load(io, p1)?;
    let f2 = load(io, p2)?;
    let sum = fiber_sum(&f1, &f2).map_err(|e| {
        let code = match e {
            CatalogError::GenusMismatch(..) => exit::INPUT,
            _ => exit::PRECONDITION,
        };
        Failure::new(code, e.to_string())
    })?;
    let fmt = match output.extension().and_then(|e| e.to_str()) {
        Some("json") => Format::Json,
        _ => Format::Dsl,
    };
    std::fs::write(output, format::serialize(&sum, fmt))
        .map_err(|e| Failure::new(exit::INPUT, format!("{}: {e}", output.display())))?;
    let c = counts(&sum);
    match io.format {
        OutputFormat::Text => io.print(&format!(
            "wrote {} ({} letters, {} curves)\n",
            output.display(),
            c.l,
            sum.curves().len()
        )),
        OutputFormat::Json => io.json(&json!({
            "output": output.display().to_string(),
            "name": sum.name(),
            "l": c.l,
            "curves": sum.curves().len(),
        })),
    }
    Ok(exit::OK)
}

/// Parses `a=1,0;b=0,1;c=sep:1`.
pub fn parse_curve_spec(spec: &str) -> Result<Vec<(String, Curve)>, String> {
    spec.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let (name, rhs) = item
                .split_once('=')
                .ok_or_else(|| format!("'{item}': expected name=coords or name=sep:k"))?;
            let curve = match rhs.trim().strip_prefix("sep:") {
                Some(k) => Curve::Separating {
                    side_genus: k.trim().parse().map_err(|_| format!("'{item}': bad side genus"))?,
                },
                None => Curve::NonSeparating(HomologyClass::new(
                    rhs.trim()
                        .trim_start_matches('(')
                        .trim_end_matches(')')
                        .split(',')
                        .map(|x| x.trim().parse())
                        .collect::<Result<_, _>>()
                        .map_err(|_| format!("'{item}': bad coordinates"))?,
                )),
            };
            Ok((name.trim().to_string(), curve))
        })
        .collect()
}

fn cmd_search(io: &mut Io, genus: usize, curves: &str, max_len: usize, all: bool, workers: Option<usize>) -> Outcome {
    let generators = parse_curve_spec(curves).map_err(|e| Failure::new(exit::INPUT, format!("--curves {e}")))?;
    if let Some((n, _)) = generators
        .iter()
        .find(|(_, c)| matches!(c, Curve::NonSeparating(v) if v.len() != 2 * genus))
    {
        return Err(Failure::new(
            exit::INPUT,
            format!("--curves: '{n}' needs {} coordinates", 2 * genus),
        ));
    }
    let spec = SearchSpec {
        g: genus,
        generators,
        max_length: max_len,
        require_closed: !all,
    };
    let budget = budget_from_env().map_err(|e| Failure::new(exit::INPUT, e.to_string()))?;
    ensure_calibrated()?;
    let hits = search_with_budget(&spec, budget, workers).map_err(|e| match e {
        CatalogError::BudgetExceeded { .. } => Failure::new(exit::BUDGET, e.to_string()),
        other => Failure::new(exit::INPUT, other.to_string()),
    })?;
    match io.format {
        OutputFormat::Text => {
            let mut s = String::new();
            for h in &hits {
                let _ = write!(s, "{} {}", h.word.join(" "), h.closure);
                if let Some(r) = &h.report {
                    let _ = write!(s, " sigma={} e={} c1_squared={}", r.sigma, r.e, r.c1_squared);
                }
                s.push('\n');
            }
            let _ = writeln!(s, "{} word(s)", hits.len());
            io.print(&s);
        }
        OutputFormat::Json => io.json(&hits),
    }
    Ok(exit::OK)
}
