//! Command definitions and their execution.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use hforms_core::forms::{
    is_semistable, max_multiplicity, parse_form, ProjectivePoint, QForm, Root, RootDivisor,
};
use hforms_core::heights::{
    bad_primes, minimize_chow_norm, minimize_coefficient_sup, reduce_at, roots_f64, verify_relations,
    ArchMinimum, HeightConfig, HeightReport, Precision, ReportConfig,
};
use hforms_core::Error;
use num_complex::Complex;

use crate::corpus::{self, CorpusError, CorpusRecord, Summary, DEFAULT_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "hforms", version, about = "Heights of binary forms over the rationals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum PrecisionArg {
    Double,
    Extended,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ObjectiveArg {
    Chow,
    Coeff,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Full height report for one form.
    Height {
        /// Polynomial in x, y or coefficient list a0,...,ad (a_i multiplies x^i y^(d-i)).
        #[arg(allow_hyphen_values = true)]
        form: String,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, value_enum, default_value = "double")]
        precision: PrecisionArg,
        /// Relation tolerance.
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
        #[arg(long)]
        json: bool,
    },
    /// Check the height relations over a corpus or random forms.
    Verify {
        #[arg(long, conflicts_with = "random")]
        corpus: Option<PathBuf>,
        #[arg(long, requires = "degree")]
        random: Option<usize>,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, default_value_t = 5)]
        bound: u32,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
        #[arg(long, value_enum, default_value = "double")]
        precision: PrecisionArg,
    },
    /// Enumerate primitive integral forms with bounded coefficients.
    Enumerate {
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        bound: u32,
        #[arg(long)]
        out: PathBuf,
        /// Also write a CSV next to the JSONL output.
        #[arg(long)]
        csv: bool,
        /// Refuse lattices with more tuples than this.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        /// Record per-form wall time (makes output run dependent).
        #[arg(long)]
        timing: bool,
    },
    /// Local minimality at one prime or at every bad prime.
    Reduce {
        #[arg(allow_hyphen_values = true)]
        form: String,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(short = 'p', long = "prime", conflicts_with = "all_bad_primes")]
        prime: Option<u64>,
        #[arg(long)]
        all_bad_primes: bool,
        #[arg(long)]
        json: bool,
    },
    /// Minimize an archimedean norm over SL2(C).
    MinimizeArch {
        #[arg(allow_hyphen_values = true)]
        form: Option<String>,
        #[arg(long)]
        degree: Option<usize>,
        /// Root list such as "1:0,0:1" or "0:1^2,1:1"; entries are x:y with
        /// optional complex parts "1+2i:1".
        #[arg(long, conflicts_with = "form")]
        roots: Option<String>,
        #[arg(long, value_enum, default_value = "chow")]
        objective: ObjectiveArg,
        #[arg(long, default_value_t = 500)]
        max_iter: usize,
        #[arg(long)]
        json: bool,
    },
}

/// Error carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: EXIT_DOMAIN,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_IO,
            message: format!("I/O error: {e}"),
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure {
            code: EXIT_IO,
            message: format!("CSV error: {e}"),
        }
    }
}

impl From<CorpusError> for Failure {
    fn from(e: CorpusError) -> Self {
        match e {
            CorpusError::Io(e) => e.into(),
            CorpusError::Domain(e) => e.into(),
            CorpusError::Format(_) => Failure {
                code: EXIT_IO,
                message: e.to_string(),
            },
        }
    }
}

fn domain(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_DOMAIN,
        message: message.into(),
    }
}

fn height_config(p: PrecisionArg) -> HeightConfig {
    HeightConfig {
        precision: match p {
            PrecisionArg::Double => Precision::Double,
            PrecisionArg::Extended => Precision::Extended,
        },
        ..HeightConfig::default()
    }
}

fn report_config(p: PrecisionArg, tolerance: f64) -> ReportConfig {
    ReportConfig {
        heights: height_config(p),
        tolerance,
        ..ReportConfig::default()
    }
}

/// Runs a parsed command, writing results to `out` and diagnostics to
/// `err`. Returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Height {
            form,
            degree,
            precision,
            tolerance,
            json,
        } => cmd_height(&form, degree, precision, tolerance, json, out),
        Command::Verify {
            corpus,
            random,
            degree,
            bound,
            seed,
            tolerance,
            precision,
        } => cmd_verify(corpus.as_deref(), random, degree, bound, seed, tolerance, precision, out, err),
        Command::Enumerate {
            degree,
            bound,
            out: path,
            csv,
            cap,
            timing,
        } => cmd_enumerate(degree, bound, &path, csv, cap, timing, out, err),
        Command::Reduce {
            form,
            degree,
            prime,
            all_bad_primes,
            json,
        } => cmd_reduce(&form, degree, prime, all_bad_primes, json, out),
        Command::MinimizeArch {
            form,
            degree,
            roots,
            objective,
            max_iter,
            json,
        } => cmd_minimize_arch(form.as_deref(), degree, roots.as_deref(), objective, max_iter, json, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn print_report(r: &HeightReport, out: &mut dyn Write) -> std::io::Result<()> {
    let num = |n: &hforms_core::heights::Num| match n.value() {
        Some(x) => format!("{x:.12}"),
        None => serde_json::to_value(n).unwrap().as_str().unwrap_or("").to_string(),
    };
    writeln!(out, "form              {}", r.form)?;
    writeln!(out, "degree            {}", r.degree)?;
    writeln!(out, "semistable        {}", r.semistable)?;
    writeln!(out, "stable            {}", r.stable)?;
    writeln!(out, "max multiplicity  {}", r.max_multiplicity)?;
    if let Some(n) = r.aut_order {
        writeln!(out, "automorphisms     {n}")?;
    }
    for (name, v) in [
        ("naive H", &r.naive_height),
        ("minimal H~ (upper)", &r.minimal_height_upper),
        ("moduli", &r.moduli_height),
        ("lwh(xi)", &r.lwh_xi),
        ("chowh", &r.chowh),
        ("cih (decomposition)", &r.cih_decomp),
        ("cih (naive)", &r.cih_naive),
        ("cih (closed form)", &r.cih_closed_form),
        ("git height", &r.git_height),
        ("faltings margin", &r.faltings_margin),
    ] {
        writeln!(out, "{name:<20} {}", num(v))?;
    }
    for rel in &r.relations {
        let status = serde_json::to_value(rel.status).unwrap();
        writeln!(
            out,
            "{:<3} {:<40} residual {:<22} {}",
            rel.name,
            rel.statement,
            num(&rel.residual),
            status.as_str().unwrap()
        )?;
    }
    writeln!(out, "ledger")?;
    for e in &r.ledger {
        writeln!(out, "  {:<45} {}", e.key, num(&e.value))?;
    }
    Ok(())
}

fn cmd_height(
    form: &str,
    degree: Option<usize>,
    precision: PrecisionArg,
    tolerance: f64,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let f = parse_form(form, degree)?;
    let r = verify_relations(&f, &report_config(precision, tolerance))?;
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(&r).expect("report serializes"))?;
    } else {
        print_report(&r, out)?;
    }
    Ok(if r.violations().count() > 0 { EXIT_VIOLATION } else { EXIT_OK })
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    corpus_path: Option<&Path>,
    random: Option<usize>,
    degree: Option<usize>,
    bound: u32,
    seed: u64,
    tolerance: f64,
    precision: PrecisionArg,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let forms = match (corpus_path, random) {
        (Some(p), _) => corpus::read_corpus(BufReader::new(File::open(p)?))?,
        (None, Some(n)) => {
            let d = degree.ok_or_else(|| domain("--random needs --degree"))?;
            if !(3..=6).contains(&d) {
                return Err(Error::UnsupportedDegree {
                    degree: d,
                    supported: "verify needs degree 3, 4, 5 or 6",
                }
                .into());
            }
            corpus::random_forms(n, d, bound, seed)?
        }
        (None, None) => return Err(domain("give --corpus FILE or --random N --degree D")),
    };
    if forms.is_empty() {
        writeln!(err, "warning: no forms to verify")?;
    }
    let cfg = report_config(precision, tolerance);
    let mut summary = Summary::default();
    for f in &forms {
        let r = verify_relations(f, &cfg)?;
        for v in r.violations() {
            writeln!(err, "violation {} on {}: residual {:?}", v.name, r.form, v.residual)?;
        }
        summary.add(&r);
    }
    summary.write_table(out)?;
    Ok(if summary.violations() > 0 { EXIT_VIOLATION } else { EXIT_OK })
}

#[allow(clippy::too_many_arguments)]
fn cmd_enumerate(
    degree: usize,
    bound: u32,
    path: &Path,
    csv: bool,
    cap: u64,
    timing: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    if !(3..=6).contains(&degree) {
        return Err(Error::UnsupportedDegree {
            degree,
            supported: "enumeration needs degree 3, 4, 5 or 6",
        }
        .into());
    }
    let size = corpus::lattice_size(degree, bound).filter(|&n| n <= cap).ok_or_else(|| {
        domain(format!(
            "(2*{bound}+1)^{} tuples exceeds the cap {cap}; nothing was enumerated",
            degree + 1
        ))
    })?;
    let tuples = corpus::enumerate_tuples(degree, bound);
    if tuples.is_empty() {
        writeln!(err, "warning: no primitive forms with |a_i| <= {bound}")?;
    }
    let mut jsonl = BufWriter::new(File::create(path)?);
    let mut csv_writer = if csv {
        let mut w = csv::Writer::from_path(path.with_extension("csv"))?;
        corpus::write_csv_header(&mut w)?;
        Some(w)
    } else {
        None
    };
    let cfg = ReportConfig::default();
    let mut summary = Summary::default();
    corpus::process_ordered(&tuples, &cfg, corpus::worker_count(), timing, |rec: CorpusRecord| {
        writeln!(jsonl, "{}", rec.to_line())?;
        if let Some(w) = csv_writer.as_mut() {
            corpus::write_csv_row(w, &rec.report).map_err(std::io::Error::other)?;
        }
        summary.add(&rec.report);
        Ok(())
    })?;
    jsonl.flush()?;
    if let Some(mut w) = csv_writer {
        w.flush()?;
    }
    writeln!(out, "lattice tuples   {size}")?;
    summary.write_table(out)?;
    if let Some(v) = summary.max_log_ratio {
        if !v.is_finite() {
            return Err(domain("ratio of moduli to minimal height is not finite"));
        }
    }
    Ok(if summary.violations() > 0 { EXIT_VIOLATION } else { EXIT_OK })
}

fn cmd_reduce(
    form: &str,
    degree: Option<usize>,
    prime: Option<u64>,
    all: bool,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let f = parse_form(form, degree)?;
    let primes = match (prime, all) {
        (Some(p), _) => vec![p.into()],
        (None, true) => bad_primes(&f)?,
        (None, false) => return Err(domain("give -p PRIME or --all-bad-primes")),
    };
    let reports = primes.iter().map(|p| reduce_at(&f, p)).collect::<Result<Vec<_>, _>>()?;
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(&reports).expect("reports serialize"))?;
        return Ok(EXIT_OK);
    }
    if reports.is_empty() {
        writeln!(out, "no bad primes: the model is minimal everywhere")?;
    }
    for r in &reports {
        writeln!(out, "p = {}", r.prime)?;
        writeln!(out, "  multiplicity mod p     {}", r.multiplicity_mod_p)?;
        writeln!(
            out,
            "  reduction              {}",
            if r.semistable_reduction { "semistable (minimal at p)" } else { "not semistable" }
        )?;
        writeln!(out, "  invariant measure      {} -> {}", r.measure_before, r.measure_after)?;
        if !r.searched {
            writeln!(out, "  search                 skipped (prime too large)")?;
        } else if r.improved() {
            let m = &r.transformation;
            writeln!(out, "  smaller model          {}", r.model)?;
            writeln!(out, "  transformation         [[{}, {}], [{}, {}]]", m.a, m.b, m.c, m.d)?;
        } else {
            writeln!(out, "  smaller model          none found")?;
        }
        writeln!(
            out,
            "  naive height           {:.6} -> {:.6} ({})",
            r.naive_before,
            r.naive_after,
            if r.height_lowered() { "lowered" } else { "not lowered" }
        )?;
    }
    Ok(EXIT_OK)
}

/// Parses `"x:y"` entries, each optionally followed by `^m`.
pub fn parse_roots(s: &str) -> Result<RootDivisor<f64>, Failure> {
    let mut roots = Vec::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (pt, mult) = match item.split_once('^') {
            Some((p, m)) => (p, m.trim().parse::<usize>().map_err(|_| domain(format!("bad multiplicity in {item:?}")))?),
            None => (item, 1),
        };
        let (x, y) = pt.split_once(':').ok_or_else(|| domain(format!("root {item:?} is not x:y")))?;
        let parse = |t: &str| -> Result<Complex<f64>, Failure> {
            let t = t.trim().replace(' ', "");
            t.parse::<Complex<f64>>().map_err(|_| domain(format!("bad number {t:?}")))
        };
        let point = ProjectivePoint { x: parse(x)?, y: parse(y)? };
        if point.norm_sqr() == 0.0 || mult == 0 {
            return Err(domain(format!("degenerate root {item:?}")));
        }
        roots.push(Root { point, multiplicity: mult });
    }
    if roots.is_empty() {
        return Err(domain("empty root list"));
    }
    Ok(RootDivisor {
        roots,
        leading: Complex::new(1.0, 0.0),
    })
}

fn print_minimum(m: &ArchMinimum, out: &mut dyn Write) -> std::io::Result<()> {
    let c = &m.coset;
    writeln!(out, "objective          {:?}", m.objective)?;
    writeln!(out, "min value          {:.12}", m.min_value)?;
    writeln!(out, "iterations         {}", m.iterations)?;
    writeln!(out, "balanced residual  {:.3e}", m.balanced_residual)?;
    writeln!(
        out,
        "P*                 [[{:.9}, {:.9}{:+.9}i], [., {:.9}]]",
        c.p11, c.p12.0, c.p12.1, c.p22
    )?;
    if !m.orbit_values.is_empty() && m.orbit_values.len() > 1 {
        writeln!(out, "orbit minima       {:?}", m.orbit_values)?;
    }
    Ok(())
}

fn cmd_minimize_arch(
    form: Option<&str>,
    degree: Option<usize>,
    roots: Option<&str>,
    objective: ObjectiveArg,
    max_iter: usize,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let f: Option<QForm> = form.map(|s| parse_form(s, degree)).transpose()?;
    if let Some(f) = &f {
        if !(2..=10).contains(&f.degree()) {
            return Err(Error::UnsupportedDegree {
                degree: f.degree(),
                supported: "minimize-arch accepts degrees 2 to 10",
            }
            .into());
        }
        if !is_semistable(f)? {
            return Err(Error::Nullcone {
                degree: f.degree(),
                max_multiplicity: max_multiplicity(f)?,
                what: "the infimum is -infinity (the iteration diverges)",
            }
            .into());
        }
    }
    let m = match (objective, &f, roots) {
        (ObjectiveArg::Coeff, Some(f), _) => minimize_coefficient_sup(f, 8, max_iter.max(2000))?,
        (ObjectiveArg::Coeff, None, _) => return Err(domain("the coefficient objective needs a form")),
        (ObjectiveArg::Chow, Some(f), _) => minimize_chow_norm(&roots_f64(f, &HeightConfig::default())?, None, max_iter)?,
        (ObjectiveArg::Chow, None, Some(r)) => minimize_chow_norm(&parse_roots(r)?, None, max_iter)?,
        (ObjectiveArg::Chow, None, None) => return Err(domain("give a form or --roots")),
    };
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(&m).expect("minimum serializes"))?;
    } else {
        print_minimum(&m, out)?;
    }
    Ok(EXIT_OK)
}
