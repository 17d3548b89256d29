//! Per-form height report and the relation checks.

use std::fmt::Display;

use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::LogValue;
use crate::error::{Error, Result};
use crate::forms::{automorphism_group, is_semistable, is_stable, max_multiplicity, Matrix2, QForm};
use crate::invariants::evaluate_invariants;
use crate::scalar::rational_to_f64;
use crate::weighted::{faltings_height_pn, standard_height};

use super::{
    chow_height, cih_closed_form, cih_cubic_closed_form, cih_decomposition, cih_naive, git_height_point,
    minimal_height_search, naive_height, power_form_parameter, HeightConfig, SearchBudget, CIH_THESIS_REFERENCE,
};

pub const SCHEMA: &str = "hforms-1";

/// `log(2²⁸·3⁹·5⁵·7·11·13·17·43)`, the bound quoted for the ratio of the
/// moduli height to the minimal height of sextics.
pub fn sextic_ratio_constant_log() -> f64 {
    let ln = |x: f64| x.ln();
    28.0 * ln(2.0) + 9.0 * ln(3.0) + 5.0 * ln(5.0) + ln(7.0 * 11.0 * 13.0 * 17.0 * 43.0)
}

/// A reported float: a value kept at 15 significant digits, a marker for
/// an infinite height, or "n/a".
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Num {
    Value(f64),
    Infinite,
    NotApplicable,
}

impl Num {
    pub fn new(x: f64) -> Self {
        if x.is_nan() {
            Num::NotApplicable
        } else if x.is_infinite() {
            Num::Infinite
        } else {
            // + 0.0 folds -0 into 0
            Num::Value(format!("{x:.14e}").parse::<f64>().expect("formatted float") + 0.0)
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Num::Value(x) => Some(*x),
            _ => None,
        }
    }
}

impl From<Option<f64>> for Num {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Num::NotApplicable, Num::new)
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Num::Value(x) => s.serialize_f64(*x),
            Num::Infinite => s.serialize_str("inf"),
            Num::NotApplicable => s.serialize_str("n/a"),
        }
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(f64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(x) => Ok(Num::new(x)),
            Raw::S(s) if s == "inf" => Ok(Num::Infinite),
            Raw::S(s) if s == "n/a" => Ok(Num::NotApplicable),
            Raw::S(s) => Err(serde::de::Error::custom(format!("bad number {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RelationStatus {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "n/a")]
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Relation {
    pub name: String,
    pub statement: String,
    pub residual: Num,
    pub tolerance: f64,
    pub status: RelationStatus,
}

impl Relation {
    fn check(name: &str, statement: &str, residual: Option<f64>, tolerance: f64) -> Self {
        let status = match residual {
            None => RelationStatus::NotApplicable,
            Some(r) if r <= tolerance => RelationStatus::Pass,
            Some(_) => RelationStatus::Fail,
        };
        Relation {
            name: name.into(),
            statement: statement.into(),
            residual: residual.into(),
            tolerance,
            status,
        }
    }
}

/// A recorded, never asserted, value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub key: String,
    pub value: Num,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeightReport {
    pub schema: String,
    pub form: String,
    pub degree: usize,
    pub coefficients: Vec<String>,
    pub semistable: bool,
    pub stable: bool,
    pub max_multiplicity: usize,
    pub aut_order: Option<usize>,
    pub naive_height: Num,
    pub naive_finite: LogValue,
    pub minimal_height_upper: Num,
    pub minimal_form: Vec<String>,
    pub moduli_height: Num,
    pub lwh_xi: Num,
    pub lwh_xi_finite: Option<LogValue>,
    pub chowh: Num,
    pub cih_decomp: Num,
    pub cih_naive: Num,
    pub cih_closed_form: Num,
    pub git_height: Num,
    pub faltings_margin: Num,
    pub relations: Vec<Relation>,
    pub ledger: Vec<LedgerEntry>,
}

impl HeightReport {
    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.iter().find(|r| r.name == name)
    }

    pub fn ledger_value(&self, key: &str) -> Option<Num> {
        self.ledger.iter().find(|e| e.key == key).map(|e| e.value)
    }

    pub fn violations(&self) -> impl Iterator<Item = &Relation> {
        self.relations.iter().filter(|r| r.status == RelationStatus::Fail)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ReportConfig {
    pub heights: HeightConfig,
    pub tolerance: f64,
    pub search: SearchBudget,
    pub aut_tolerance: f64,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            heights: HeightConfig::default(),
            tolerance: 1e-6,
            search: SearchBudget::default(),
            aut_tolerance: 1e-7,
        }
    }
}

const R1: &str = "lwh(xi(f)) = cih(f) + chowh(f)";
const R2: &str = "lwh(xi(f)) >= 0";
const R3: &str = "h(veronese(xi(f))) = m * lwh(xi(f))";
const R4: &str = "lwh(xi(f)) + d/(m(n+1)) h(P^n) >= 0";

/// Computes every height of `f` and checks the relations between them.
/// Forms in the nullcone yield a report with the invariant heights marked
/// infinite or undefined and the relations marked "n/a".
pub fn verify_relations(f: &QForm, cfg: &ReportConfig) -> Result<HeightReport> {
    let d = f.degree();
    if !(3..=6).contains(&d) {
        return Err(Error::UnsupportedDegree {
            degree: d,
            supported: "height reports need degree 3, 4, 5 or 6",
        });
    }
    let hc = &cfg.heights;
    let tol = cfg.tolerance;
    let semistable = is_semistable(f)?;
    let naive = naive_height(f)?;
    let minimal = minimal_height_search(f, cfg.search)?;
    let chowh = chow_height(f, hc)?;
    let git = git_height_point(f, hc)?;
    let aut_order = automorphism_group(f, cfg.aut_tolerance).ok().map(|g| g.order());
    let mut ledger = Vec::new();
    let mut entry = |key: &str, v: Option<f64>| ledger.push(LedgerEntry { key: key.into(), value: v.into() });

    let mut report = HeightReport {
        schema: SCHEMA.into(),
        form: f.to_string(),
        degree: d,
        coefficients: f.coeffs().iter().map(ToString::to_string).collect(),
        semistable,
        stable: is_stable(f)?,
        max_multiplicity: max_multiplicity(f)?,
        aut_order,
        naive_height: Num::new(naive.value()),
        naive_finite: naive.finite.clone(),
        minimal_height_upper: Num::new(minimal.log_height),
        minimal_form: minimal.form.coeffs().iter().map(ToString::to_string).collect(),
        moduli_height: Num::NotApplicable,
        lwh_xi: Num::NotApplicable,
        lwh_xi_finite: None,
        chowh: Num::new(chowh),
        cih_decomp: Num::Infinite,
        cih_naive: Num::Infinite,
        cih_closed_form: Num::NotApplicable,
        git_height: Num::new(git),
        faltings_margin: Num::NotApplicable,
        relations: Vec::new(),
        ledger: Vec::new(),
    };

    let closed = match power_form_parameter(f) {
        Some(a0) => Some(cih_closed_form(d, &a0)?),
        None => None,
    };
    report.cih_closed_form = closed.into();

    if !semistable {
        report.relations = [("R1", R1), ("R2", R2), ("R3", R3), ("R4", R4)]
            .iter()
            .map(|(n, s)| Relation::check(n, s, None, tol))
            .collect();
        entry("cih_closed_form", closed);
        report.ledger = ledger;
        return Ok(report);
    }

    let xi = evaluate_invariants(f)?;
    let point = xi.to_weighted()?;
    let lwh = point.lwh();
    let lwh_v = lwh.value();
    let moduli = standard_height(&xi.values)?.value();
    let decomp = cih_decomposition(f, hc)?.value();
    let naive_cih = cih_naive(f)?;
    let veronese = standard_height(&point.veronese())?.value();
    let weights = point.weights();
    let (m, n1) = (weights.m() as f64, weights.len() as f64);
    let faltings = rational_to_f64(&faltings_height_pn(weights.len() as u64 - 1));
    let margin = lwh_v + d as f64 / (m * n1) * faltings;

    report.moduli_height = Num::new(moduli);
    report.lwh_xi = Num::new(lwh_v);
    report.lwh_xi_finite = Some(lwh.finite.clone());
    report.cih_decomp = Num::new(decomp);
    report.cih_naive = Num::new(naive_cih);
    report.faltings_margin = Num::new(margin);
    report.relations = vec![
        Relation::check("R1", R1, Some((lwh_v - decomp - chowh).abs()), tol),
        Relation::check("R2", R2, Some((-lwh_v).max(0.0)), tol),
        Relation::check("R3", R3, Some((veronese - m * lwh_v).abs()), tol),
        Relation::check("R4", R4, Some((-margin).max(0.0)), tol),
    ];

    // the readings of cih, and every pairwise difference
    let cubic = if d == 3 { cih_cubic_closed_form(f, hc).ok() } else { None };
    let readings = [
        ("cih_decomposition", Some(decomp)),
        ("cih_closed_form", closed),
        ("cih_cubic_proof", cubic.as_ref().map(|c| c.proof)),
        ("cih_cubic_statement", cubic.as_ref().map(|c| c.statement)),
    ];
    for (key, v) in &readings {
        entry(key, *v);
    }
    entry("cih_naive", Some(naive_cih));
    if closed.is_some() && d == 3 {
        entry("cih_thesis_reference", Some(CIH_THESIS_REFERENCE));
    }
    for (i, (a, va)) in readings.iter().enumerate() {
        for (b, vb) in &readings[i + 1..] {
            if let (Some(x), Some(y)) = (va, vb) {
                entry(&format!("{a} - {b}"), Some(x - y));
            }
        }
    }
    if report.stable {
        entry("lwh_xi_stable_strict_positivity", Some(lwh_v));
    }
    let q_max = weights.max() as f64;
    entry("log_moduli_over_minimal_pow_qmax", Some(moduli - q_max * minimal.log_height));
    if d == 6 {
        entry("log_sextic_ratio_constant", Some(sextic_ratio_constant_log()));
    }
    report.ledger = ledger;
    Ok(report)
}

pub(crate) fn ser_display<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub(crate) fn ser_coeffs<S: Serializer>(f: &QForm, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(f.coeffs().iter().map(ToString::to_string))
}

pub(crate) fn ser_matrix<S: Serializer>(m: &Matrix2<BigRational>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq([&m.a, &m.b, &m.c, &m.d].iter().map(ToString::to_string))
}
