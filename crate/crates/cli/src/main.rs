//! `polycomp`: decide, certify and refute common composites from the command line.
//!
//! Exit status:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | composite found, certificate valid, or command succeeded |
//! | 1 | no composite: none below the bound, or a refutation |
//! | 2 | undecided: a cap fired or the analysis is inconclusive |
//! | 3 | invalid input (flags, field, polynomial, config, file syntax) |
//! | 4 | I/O failure |
//! | 5 | a certificate failed verification |
//! | 6 | computation not supported for this input |

mod config;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use polycomp::analyze::{analyze, AnalysisReport, AnalyzeConfig, Verdict};
use polycomp::closure::{fiber, ClosureOutcome, Consistency};
use polycomp::families::{dickson, sample_corpus};
use polycomp::format::{
    composite_record, instance_record, parse_records, refutation_record, report_records,
    search_record, write_records, Certificate, Record,
};
use polycomp::refute::{check_refutation, refute, RefutationCertificate};
use polycomp::search::{
    check_certificate, default_bound, fiber_iterate, search_lin, CompositeCertificate,
    SearchOutcome,
};
use polycomp::{parse_poly, Error, FieldElement, FieldSpec, Polynomial};

use config::{resolve, ConfigError, OutputFormat, RunArgs, RunConfig};

#[derive(Parser)]
#[command(
    name = "polycomp",
    version,
    about = "Common composites of univariate polynomials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Both,
    Lin,
    Fiber,
}

#[derive(Subcommand)]
enum Command {
    /// Look for a minimal common composite below a degree bound.
    Search {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value = "both")]
        method: Method,
    },
    /// Search, close fibers from start points, then look for refuting cycles.
    Analyze {
        #[command(flatten)]
        run: RunArgs,
        /// Closure start point in the coefficient field (repeatable; default 0).
        #[arg(long = "start")]
        starts: Vec<String>,
    },
    /// Look for a cycle certificate that no common composite exists.
    Refute {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Roots of f1(x) - f1(a), and of f2(x) - f2(a) when f2 is given.
    Fiber {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        at: String,
    },
    /// Re-check every certificate in the given files.
    Verify {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Print the Dickson polynomial D_n(x, alpha).
    Dickson {
        n: u64,
        alpha: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Write a corpus of pairs with known minimal composites.
    GenCorpus {
        #[command(flatten)]
        run: RunArgs,
        /// Random instances per field for the sampled families.
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Syntax { .. }
            | Error::UnknownSymbol { .. }
            | Error::InvalidField(_)
            | Error::InvalidBound(_)
            | Error::InvalidCap(_)
            | Error::InvalidParams(_)
            | Error::IncompatibleFields(_)
            | Error::InvalidCycle(_)
            | Error::FInKxp(_)
            | Error::Format(_) => 3,
            Error::ExtensionCapExceeded { .. } => 2,
            _ => 6,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Io(m) => Failure {
                code: 4,
                message: m,
            },
            ConfigError::Invalid(m) => Failure::input(m),
        }
    }
}

type Outcome = Result<(u8, String), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    let (cfg, result) = match command {
        Command::Verify { paths } => return cmd_verify(&paths),
        Command::Search { run, method } => {
            let cfg = resolve(&run)?;
            let r = cmd_search(&cfg, method);
            (cfg, r)
        }
        Command::Analyze { run, starts } => {
            let cfg = resolve(&run)?;
            let r = cmd_analyze(&cfg, &starts);
            (cfg, r)
        }
        Command::Refute { run } => {
            let cfg = resolve(&run)?;
            let r = cmd_refute(&cfg);
            (cfg, r)
        }
        Command::Fiber { run, at } => {
            let cfg = resolve(&run)?;
            let r = cmd_fiber(&cfg, &at);
            (cfg, r)
        }
        Command::Dickson { n, alpha, run } => {
            let cfg = resolve(&run)?;
            let r = cmd_dickson(&cfg, n, &alpha);
            (cfg, r)
        }
        Command::GenCorpus { run, count } => {
            let cfg = resolve(&run)?;
            let r = cmd_gen_corpus(&cfg, count);
            (cfg, r)
        }
    };
    let (code, text) = result?;
    emit(&cfg, &text)?;
    Ok(code)
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), Failure> {
    match &cfg.output {
        None => {
            print!("{text}");
            let _ = std::io::stdout().flush();
            Ok(())
        }
        Some(path) => write_atomic(path, text).map_err(|e| Failure {
            code: 4,
            message: format!("{}: {e}", path.display()),
        }),
    }
}

fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn field(cfg: &RunConfig) -> Result<FieldSpec, Failure> {
    let text = cfg
        .field
        .as_deref()
        .ok_or_else(|| Failure::input("--field is required"))?;
    Ok(FieldSpec::parse(text, cfg.seed)?)
}

fn poly(text: Option<&str>, name: &str, spec: &FieldSpec) -> Result<Polynomial, Failure> {
    let text = text.ok_or_else(|| Failure::input(format!("--{name} is required")))?;
    parse_poly(text, spec).map_err(|e| Failure::input(format!("{name}: {e}")))
}

fn pair(cfg: &RunConfig) -> Result<(Polynomial, Polynomial), Failure> {
    let spec = field(cfg)?;
    Ok((
        poly(cfg.f1.as_deref(), "f1", &spec)?,
        poly(cfg.f2.as_deref(), "f2", &spec)?,
    ))
}

fn element(text: &str, spec: &FieldSpec) -> Result<FieldElement, Failure> {
    let p = parse_poly(text, spec).map_err(|e| Failure::input(format!("`{text}`: {e}")))?;
    if !p.is_constant() {
        return Err(Failure::input(format!("`{text}` is not a field element")));
    }
    Ok(p.coeff(0))
}

fn composite_text(c: &CompositeCertificate) -> String {
    format!(
        "common composite of degree {}{}\n  h  = {}\n  g1 = {}\n  g2 = {}\n",
        c.h.deg(),
        if c.minimal { " (minimal)" } else { "" },
        c.h,
        c.g1,
        c.g2
    )
}

fn refutation_text(c: &RefutationCertificate) -> String {
    let pts: Vec<String> = c.points.iter().map(|p| p.to_string()).collect();
    let mut s = format!(
        "{} refutation in {}\n  cycle: {}\n",
        c.kind,
        c.ambient,
        pts.join(", ")
    );
    if let Some(p) = &c.product {
        s.push_str(&format!("  multiplicity product: {p}\n"));
    }
    if let (Some(l), Some(r)) = (&c.lhs, &c.rhs) {
        s.push_str(&format!("  derivative products: {l} vs {r}\n"));
    }
    if let (Some(d), Some(p)) = (c.degree, c.prime) {
        s.push_str(&format!("  point degree {d}, prime factor {p}\n"));
    }
    s
}

fn outcome_text(name: &str, o: &SearchOutcome) -> String {
    match o {
        SearchOutcome::Found(c) => format!("{name}: found degree {}\n", c.h.deg()),
        SearchOutcome::NoneBelow(b) => format!("{name}: no common composite of degree <= {b}\n"),
        SearchOutcome::CapExceeded { cap, trace } => {
            format!("{name}: degree cap {cap} exceeded, degrees {trace:?}\n")
        }
    }
}

fn cmd_search(cfg: &RunConfig, method: Method) -> Outcome {
    let (f1, f2) = pair(cfg)?;
    let bound = cfg.bound.unwrap_or_else(|| default_bound(&f1, &f2));
    let fib = match method {
        Method::Lin => None,
        _ => Some(fiber_iterate(&f1, &f2, bound)?.outcome),
    };
    let lin = match method {
        Method::Fiber => None,
        _ => Some(search_lin(&f1, &f2, bound)?),
    };
    if let (Some(a), Some(b)) = (
        fib.as_ref().and_then(|o| o.found()),
        lin.as_ref().and_then(|o| o.found()),
    ) {
        if a.h != b.h {
            return Err(Failure {
                code: 6,
                message: format!("methods disagree: {} vs {}", a.h, b.h),
            });
        }
    }
    // the fiber iteration leads; the linear search settles what it leaves open
    let primary = match (&fib, &lin) {
        (Some(SearchOutcome::Found(_)), _) | (Some(_), None) => fib.clone().unwrap(),
        (Some(capped), Some(l)) if l.found().is_none() => capped.clone(),
        (_, Some(l)) => l.clone(),
        (None, None) => unreachable!(),
    };
    let code = match &primary {
        SearchOutcome::Found(_) => 0,
        SearchOutcome::NoneBelow(_) => 1,
        SearchOutcome::CapExceeded { .. } => 2,
    };
    let mut records = Vec::new();
    if let Some(o) = &fib {
        records.push(search_record(&f1, &f2, "fiber", o));
    }
    if let Some(o) = &lin {
        records.push(search_record(&f1, &f2, "lin", o));
    }
    if let Some(c) = primary.found() {
        records.push(composite_record(c));
    }
    let text = match cfg.format {
        OutputFormat::Machine => write_records(&records),
        OutputFormat::Text => {
            let mut s = String::new();
            if let Some(o) = &fib {
                s.push_str(&outcome_text("fiber iteration", o));
            }
            if let Some(o) = &lin {
                s.push_str(&outcome_text("linear search", o));
            }
            if let Some(c) = primary.found() {
                s.push_str(&composite_text(c));
            }
            s
        }
    };
    Ok((code, text))
}

fn report_text(r: &AnalysisReport) -> String {
    let mut s = format!("fiber iteration degrees: {:?}\n", r.fiber.degrees());
    for seed in &r.seeds {
        match &seed.closure {
            ClosureOutcome::Closed(set) => {
                s.push_str(&format!(
                    "start {}: closed set of {} points in {}\n",
                    seed.seed,
                    set.len(),
                    set.ambient
                ));
            }
            ClosureOutcome::CapExceeded(t) => {
                s.push_str(&format!(
                    "start {}: closure stopped after {} points ({:?})\n",
                    seed.seed,
                    t.points.len(),
                    t.cap
                ));
            }
        }
        match &seed.consistency {
            Some(Consistency::Consistent(l)) => {
                s.push_str(&format!("  consistent, labels {l:?}\n"))
            }
            Some(Consistency::Inconsistent(c)) => {
                s.push_str(&format!("  inconsistent, product {}\n", c.product))
            }
            None => {}
        }
    }
    match &r.verdict {
        Verdict::Exists(c) => s.push_str(&format!("verdict: exists\n{}", composite_text(c))),
        Verdict::NotExists(c) => s.push_str(&format!(
            "verdict: no common composite\n{}",
            refutation_text(c)
        )),
        Verdict::Inconclusive(reasons) => {
            s.push_str("verdict: inconclusive\n");
            for m in reasons {
                s.push_str(&format!("  {m}\n"));
            }
        }
    }
    s
}

fn cmd_analyze(cfg: &RunConfig, starts: &[String]) -> Outcome {
    let (f1, f2) = pair(cfg)?;
    let seeds = starts
        .iter()
        .map(|s| element(s, f1.spec()))
        .collect::<Result<Vec<_>, _>>()?;
    let acfg = AnalyzeConfig {
        caps: cfg.caps(),
        bound: cfg.bound,
        max_d: cfg.max_d,
        field_seed: cfg.seed,
        ..AnalyzeConfig::default()
    };
    let report = analyze(&f1, &f2, &seeds, &acfg)?;
    let code = match report.verdict {
        Verdict::Exists(_) => 0,
        Verdict::NotExists(_) => 1,
        Verdict::Inconclusive(_) => 2,
    };
    let text = match cfg.format {
        OutputFormat::Machine => write_records(&report_records(&report)),
        OutputFormat::Text => report_text(&report),
    };
    Ok((code, text))
}

fn cmd_refute(cfg: &RunConfig) -> Outcome {
    let (f1, f2) = pair(cfg)?;
    let run = refute(&f1, &f2, cfg.refute_config())?;
    let text = match (&run.certificate, cfg.format) {
        (Some(c), OutputFormat::Machine) => write_records(&[refutation_record(c)]),
        (Some(c), OutputFormat::Text) => refutation_text(c),
        (None, OutputFormat::Machine) => {
            let mut r = Record::new("RefuteSearch");
            r.push("field", f1.spec());
            r.push("f1", &f1);
            r.push("f2", &f2);
            r.push("max_d", cfg.max_d);
            r.push("outcome", "NoCertificate");
            write_records(&[r])
        }
        (None, OutputFormat::Text) => format!("no refuting cycle with d <= {}\n", cfg.max_d),
    };
    Ok((if run.certificate.is_some() { 1 } else { 2 }, text))
}

fn cmd_fiber(cfg: &RunConfig, at: &str) -> Outcome {
    let spec = field(cfg)?;
    let mut fs = vec![("f1", poly(cfg.f1.as_deref(), "f1", &spec)?)];
    if cfg.f2.is_some() {
        fs.push(("f2", poly(cfg.f2.as_deref(), "f2", &spec)?));
    }
    let a = element(at, &spec)?;
    let mut records = Vec::new();
    let mut text = String::new();
    for (name, f) in &fs {
        let (roots, ambient) = fiber(f, &a, &spec, cfg.max_ext, cfg.seed)?;
        let mut r = Record::new("Fiber");
        r.push("field", &spec);
        r.push("f", f);
        r.push("at", a.to_vector_string());
        r.push("ambient", &ambient);
        let pts: Vec<String> = roots.iter().map(|x| x.root.to_vector_string()).collect();
        let ms: Vec<String> = roots.iter().map(|x| x.multiplicity.to_string()).collect();
        r.push("points", pts.join(" "));
        r.push("multiplicities", ms.join(","));
        records.push(r);
        text.push_str(&format!("{name} fiber of {a} in {ambient}:\n"));
        for x in &roots {
            text.push_str(&format!("  {} (multiplicity {})\n", x.root, x.multiplicity));
        }
    }
    Ok((
        0,
        if cfg.format == OutputFormat::Machine {
            write_records(&records)
        } else {
            text
        },
    ))
}

fn cmd_dickson(cfg: &RunConfig, n: u64, alpha: &str) -> Outcome {
    let spec = match &cfg.field {
        Some(f) => FieldSpec::parse(f, cfg.seed)?,
        None => FieldSpec::rationals(),
    };
    let d = dickson(n, &element(alpha, &spec)?);
    let text = match cfg.format {
        OutputFormat::Text => format!("{d}\n"),
        OutputFormat::Machine => {
            let mut r = Record::new("Dickson");
            r.push("field", &spec);
            r.push("n", n);
            r.push("alpha", alpha.trim());
            r.push("poly", &d);
            write_records(&[r])
        }
    };
    Ok((0, text))
}

fn cmd_gen_corpus(cfg: &RunConfig, count: usize) -> Outcome {
    let corpus = sample_corpus(cfg.seed, count)?;
    let records: Vec<Record> = corpus.iter().map(instance_record).collect();
    Ok((0, write_records(&records)))
}

fn cmd_verify(paths: &[PathBuf]) -> Result<u8, Failure> {
    let mut checked = 0;
    let mut failed = 0;
    for path in paths {
        let text = std::fs::read_to_string(path).map_err(|e| Failure {
            code: 4,
            message: format!("{}: {e}", path.display()),
        })?;
        let records =
            parse_records(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        for (i, r) in records.iter().enumerate() {
            let cert = Certificate::from_record(r)
                .map_err(|e| Failure::input(format!("{} record {}: {e}", path.display(), i + 1)))?;
            let Some(cert) = cert else { continue };
            checked += 1;
            let (label, result) = match &cert {
                Certificate::Composite(c) => (
                    "CompositeCertificate",
                    check_certificate(c).map(|_| composite_text(c)),
                ),
                Certificate::Refutation(c) => {
                    (r.kind(), check_refutation(c).map(|_| refutation_text(c)))
                }
            };
            match result {
                Ok(details) => print!(
                    "{}: record {}: {label} valid\n{details}",
                    path.display(),
                    i + 1
                ),
                Err(reason) => {
                    failed += 1;
                    println!(
                        "{}: record {}: {label} INVALID: {reason}",
                        path.display(),
                        i + 1
                    );
                }
            }
        }
    }
    if checked == 0 {
        return Err(Failure::input("no certificate records found"));
    }
    Ok(if failed == 0 { 0 } else { 5 })
}
