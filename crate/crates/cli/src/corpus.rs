//! Bounded enumeration of integral forms and corpus records.

use std::io::{BufRead, Write};
use std::time::Instant;

use hforms_core::forms::{is_semistable, QForm};
use hforms_core::heights::{sextic_ratio_constant_log, verify_relations, HeightReport, ReportConfig, RelationStatus};
use hforms_core::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Default cap on `(2B + 1)^(d + 1)`.
pub const DEFAULT_CAP: u64 = 50_000_000;

/// Forms per ordered output block.
const BLOCK: usize = 512;

/// One line of a JSONL corpus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusRecord {
    #[serde(flatten)]
    pub report: HeightReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl CorpusRecord {
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }
}

/// Lexicographically least of `c`, its reversal and their negatives.
pub fn canonical(c: &[i64]) -> Vec<i64> {
    let rev: Vec<i64> = c.iter().rev().copied().collect();
    let neg = |v: &[i64]| v.iter().map(|a| -a).collect::<Vec<_>>();
    let mut best = c.to_vec();
    for cand in [rev.clone(), neg(c), neg(&rev)] {
        if cand < best {
            best = cand;
        }
    }
    best
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Number of coefficient tuples scanned for degree `d` and bound `B`.
pub fn lattice_size(degree: usize, bound: u32) -> Option<u64> {
    (2 * bound as u64 + 1).checked_pow(degree as u32 + 1)
}

/// Primitive tuples `(a₀, …, a_d)` with `|aᵢ| ≤ B` that are their own
/// canonical representative, in lattice order.
pub fn enumerate_tuples(degree: usize, bound: u32) -> Vec<Vec<i64>> {
    let base = 2 * bound as u64 + 1;
    let total = lattice_size(degree, bound).expect("checked by caller");
    let b = bound as i64;
    let mut out = Vec::new();
    for idx in 0..total {
        let mut c = vec![0i64; degree + 1];
        let mut r = idx;
        for slot in c.iter_mut().rev() {
            *slot = (r % base) as i64 - b;
            r /= base;
        }
        if c.iter().fold(0, |g, &a| gcd(g, a)) != 1 {
            continue;
        }
        if canonical(&c) == c {
            out.push(c);
        }
    }
    out
}

/// Report for one integral tuple.
pub fn record_for(coeffs: &[i64], cfg: &ReportConfig, timing: bool) -> Result<CorpusRecord> {
    let start = Instant::now();
    let f = QForm::from_integers(coeffs)?;
    let report = verify_relations(&f, cfg)?;
    let wall_time_ms = timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    Ok(CorpusRecord { report, wall_time_ms })
}

/// Running statistics over reports.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub forms: usize,
    pub skipped_unstable: usize,
    pub pass: [usize; 4],
    pub fail: [usize; 4],
    pub max_residual: [f64; 4],
    /// Largest `log(𝓗(f) / H̃_upper(f)^{q_max})`.
    pub max_log_ratio: Option<f64>,
    pub min_faltings_margin: Option<f64>,
    /// For sextics, `log` of the quoted bound on the ratio.
    pub sextic_constant_log: Option<f64>,
}

impl Summary {
    pub fn add(&mut self, r: &HeightReport) {
        self.forms += 1;
        if !r.semistable {
            self.skipped_unstable += 1;
            return;
        }
        for (k, rel) in r.relations.iter().enumerate().take(4) {
            match rel.status {
                RelationStatus::Pass => self.pass[k] += 1,
                RelationStatus::Fail => self.fail[k] += 1,
                RelationStatus::NotApplicable => {}
            }
            if let Some(x) = rel.residual.value() {
                self.max_residual[k] = self.max_residual[k].max(x);
            }
        }
        if let Some(v) = r.ledger_value("log_moduli_over_minimal_pow_qmax").and_then(|n| n.value()) {
            self.max_log_ratio = Some(self.max_log_ratio.map_or(v, |m| m.max(v)));
        }
        if let Some(v) = r.faltings_margin.value() {
            self.min_faltings_margin = Some(self.min_faltings_margin.map_or(v, |m| m.min(v)));
        }
        if r.degree == 6 {
            self.sextic_constant_log = Some(sextic_ratio_constant_log());
        }
    }

    pub fn violations(&self) -> usize {
        self.fail.iter().sum()
    }

    pub fn below_sextic_constant(&self) -> Option<bool> {
        Some(self.max_log_ratio? < self.sextic_constant_log?)
    }

    pub fn write_table(&self, w: &mut dyn Write) -> std::io::Result<()> {
        writeln!(w, "forms            {}", self.forms)?;
        writeln!(w, "skipped-unstable {}", self.skipped_unstable)?;
        for k in 0..4 {
            writeln!(
                w,
                "R{}               pass {} fail {} max residual {:.3e}",
                k + 1,
                self.pass[k],
                self.fail[k],
                self.max_residual[k]
            )?;
        }
        if let Some(v) = self.max_log_ratio {
            writeln!(w, "max log(H/H~^q)  {v:.6}")?;
        }
        if let Some(v) = self.min_faltings_margin {
            let v = if v.abs() < 5e-7 { 0.0 } else { v };
            writeln!(w, "min R4 margin    {v:.6}")?;
        }
        if let (Some(c), Some(b)) = (self.sextic_constant_log, self.below_sextic_constant()) {
            writeln!(w, "sextic constant  log {c:.6}, observed below: {b}")?;
        }
        Ok(())
    }
}

/// Computes the records of `tuples` on `workers` threads, handing them to
/// `sink` in input order.
pub fn process_ordered(
    tuples: &[Vec<i64>],
    cfg: &ReportConfig,
    workers: usize,
    timing: bool,
    mut sink: impl FnMut(CorpusRecord) -> std::io::Result<()>,
) -> std::result::Result<(), CorpusError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CorpusError::Io(std::io::Error::other(e)))?;
    for block in tuples.chunks(BLOCK) {
        let records: Vec<Result<CorpusRecord>> =
            pool.install(|| block.par_iter().map(|c| record_for(c, cfg, timing)).collect());
        for r in records {
            sink(r?).map_err(CorpusError::Io)?;
        }
    }
    Ok(())
}

#[derive(Debug)]
pub enum CorpusError {
    Io(std::io::Error),
    Domain(hforms_core::Error),
    Format(String),
}

impl From<hforms_core::Error> for CorpusError {
    fn from(e: hforms_core::Error) -> Self {
        CorpusError::Domain(e)
    }
}

impl std::fmt::Display for CorpusError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CorpusError::Io(e) => write!(f, "I/O error: {e}"),
            CorpusError::Domain(e) => write!(f, "{e}"),
            CorpusError::Format(s) => write!(f, "bad corpus line: {s}"),
        }
    }
}

/// Worker count from `HFORMS_WORKERS`, else the available parallelism.
pub fn worker_count() -> usize {
    std::env::var("HFORMS_WORKERS")
        .ok()
        .and_then(|s| s.parse().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Reads the forms of a corpus: JSONL records with a `coefficients` array
/// (numbers or rational strings), or bare form strings one per line.
pub fn read_corpus(r: impl BufRead) -> std::result::Result<Vec<QForm>, CorpusError> {
    let mut out = Vec::new();
    for (n, line) in r.lines().enumerate() {
        let line = line.map_err(CorpusError::Io)?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let f = if line.starts_with('{') {
            let v: serde_json::Value =
                serde_json::from_str(line).map_err(|e| CorpusError::Format(format!("line {}: {e}", n + 1)))?;
            let coeffs = v["coefficients"]
                .as_array()
                .ok_or_else(|| CorpusError::Format(format!("line {}: no coefficients", n + 1)))?;
            let text: Vec<String> = coeffs
                .iter()
                .map(|c| c.as_str().map(str::to_string).unwrap_or_else(|| c.to_string()))
                .collect();
            hforms_core::forms::parse_form(&text.join(","), None)?
        } else {
            hforms_core::forms::parse_form(line, None)?
        };
        out.push(f);
    }
    Ok(out)
}

/// `n` random semistable integral forms with `|aᵢ| ≤ B`.
pub fn random_forms(n: usize, degree: usize, bound: u32, seed: u64) -> Result<Vec<QForm>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = bound as i64;
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let c: Vec<i64> = (0..=degree).map(|_| rng.gen_range(-b..=b)).collect();
        if c.iter().all(|&a| a == 0) {
            continue;
        }
        let f = QForm::from_integers(&c)?;
        if is_semistable(&f)? {
            out.push(f);
        }
    }
    Ok(out)
}

/// CSV row: coefficients, flags and the float columns.
pub fn write_csv_header(w: &mut csv::Writer<impl Write>) -> csv::Result<()> {
    w.write_record([
        "coefficients",
        "semistable",
        "stable",
        "naive_height",
        "minimal_height_upper",
        "moduli_height",
        "lwh_xi",
        "chowh",
        "cih_decomp",
        "cih_naive",
        "cih_closed_form",
        "git_height",
        "faltings_margin",
        "r1_residual",
    ])
}

pub fn write_csv_row(w: &mut csv::Writer<impl Write>, r: &HeightReport) -> csv::Result<()> {
    let num = |n: &hforms_core::heights::Num| serde_json::to_value(n).expect("num").to_string().replace('"', "");
    let r1 = r.relation("R1").map(|x| num(&x.residual)).unwrap_or_default();
    w.write_record([
        r.coefficients.join(" "),
        r.semistable.to_string(),
        r.stable.to_string(),
        num(&r.naive_height),
        num(&r.minimal_height_upper),
        num(&r.moduli_height),
        num(&r.lwh_xi),
        num(&r.chowh),
        num(&r.cih_decomp),
        num(&r.cih_naive),
        num(&r.cih_closed_form),
        num(&r.git_height),
        num(&r.faltings_margin),
        r1,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_picks_least() {
        assert_eq!(canonical(&[1, 0, 0, -1]), vec![-1, 0, 0, 1]);
        assert_eq!(canonical(&[0, 0, 1, 1]), vec![-1, -1, 0, 0]);
    }

    #[test]
    fn enumeration_counts() {
        // primitive quadratics up to reversal and sign, |a| <= 1
        let t = enumerate_tuples(2, 1);
        assert!(t.iter().all(|c| canonical(c) == *c));
        let mut orbits = std::collections::BTreeSet::new();
        for idx in 0..27 {
            let c = vec![idx / 9 - 1, (idx / 3) % 3 - 1, idx % 3 - 1];
            if c.iter().any(|&a| a != 0) {
                orbits.insert(canonical(&c));
            }
        }
        assert_eq!(t.len(), orbits.len());
        assert!(enumerate_tuples(3, 0).is_empty());
    }

    #[test]
    fn record_round_trip() {
        let r = record_for(&[-1, 0, 0, 1], &ReportConfig::default(), false).unwrap();
        let back: CorpusRecord = serde_json::from_str(&r.to_line()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_line(), r.to_line());
        let unstable = record_for(&[0, 0, 1, 0], &ReportConfig::default(), true).unwrap();
        let back: CorpusRecord = serde_json::from_str(&unstable.to_line()).unwrap();
        assert_eq!(back, unstable);
    }

    #[test]
    fn corpus_lines() {
        let text = "{\"coefficients\": [\"-1\", \"0\", \"0\", \"1\"]}\n\nx^2*y\n{\"coefficients\": [1, 0, 1, 0, 1]}\n";
        let forms = read_corpus(text.as_bytes()).unwrap();
        assert_eq!(forms.len(), 3);
        assert_eq!(forms[1], QForm::from_integers(&[0, 0, 1, 0]).unwrap());
        assert!(read_corpus("{\"nope\": 1}".as_bytes()).is_err());
    }
}
