//! Heights of binary forms: naive, minimal, moduli, Chow, GIT and the
//! Chow-invariant height in its several readings, plus the relations that
//! tie them together.

mod arch;
mod local;
mod minimal;
mod report;

pub use arch::{minimize_chow_norm, minimize_coefficient_sup, ArchMinimum, HermitianCoset, Objective};
pub use local::{bad_primes, minimality_measure, reduce_at, ReductionReport, SEARCH_PRIME_LIMIT};
pub use minimal::{minimal_height_search, MinimalHeight, SearchBudget};
pub use report::{
    sextic_ratio_constant_log, verify_relations, HeightReport, LedgerEntry, Num, Relation, RelationStatus,
    ReportConfig, SCHEMA,
};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize_rational, LogValue};
use crate::error::{Error, Result};
use crate::forms::{discriminant, max_multiplicity, roots_with, QForm, RootConfig, RootDivisor};
use crate::invariants::{evaluate_invariants, InvariantPoint};
use crate::scalar::{ln_abs_rational, Real};
use crate::weighted::{standard_height, SplitHeight};
use crate::Ext;

/// Working precision of the root-dependent (archimedean) quantities.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    #[default]
    Double,
    /// Double-double arithmetic, about 106 significant bits.
    Extended,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct HeightConfig {
    pub precision: Precision,
    pub roots: RootConfig,
}

/// Weil height of the coefficient point `[a₀ : … : a_d]`.
pub fn naive_height(f: &QForm) -> Result<SplitHeight> {
    standard_height(f.coeffs())
}

/// Weil height of the invariant point `[ξ₀(f) : … : ξₙ(f)]` in ordinary
/// projective space.
pub fn moduli_height(f: &QForm) -> Result<SplitHeight> {
    let xi = evaluate_invariants(f)?;
    if xi.is_nullcone() {
        return Err(nullcone(f, "moduli point undefined")?);
    }
    standard_height(&xi.values)
}

fn nullcone(f: &QForm, what: &'static str) -> Result<Error> {
    Ok(Error::Nullcone {
        degree: f.degree(),
        max_multiplicity: max_multiplicity(f)?,
        what,
    })
}

/// The archimedean Chow norm `log‖s‖ = log|c| − ½ Σ bᵢ log(|xᵢ|² + |yᵢ|²)`
/// with its pieces.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChowNorm {
    pub log_norm: f64,
    pub log_leading: f64,
    /// `½ bᵢ log(|xᵢ|² + |yᵢ|²)` per distinct root.
    pub root_terms: Vec<f64>,
}

impl ChowNorm {
    pub fn chow_height(&self) -> f64 {
        -self.log_norm
    }
}

fn chow_norm_in<T: Real>(f: &QForm, cfg: RootConfig) -> Result<ChowNorm> {
    let div: RootDivisor<T> = roots_with(f, cfg)?;
    let half = T::from_f64_exact(0.5);
    let terms: Vec<T> = div
        .roots
        .iter()
        .map(|r| half * <T as crate::scalar::Ring>::from_i64(r.multiplicity as i64) * r.point.norm_sqr().ln_exact())
        .collect();
    let log_c = half * div.leading.norm_sqr().ln_exact();
    let sum = terms.iter().fold(T::zero(), |a, &b| a + b);
    Ok(ChowNorm {
        log_norm: (log_c - sum).to_f64_lossy(),
        log_leading: log_c.to_f64_lossy(),
        root_terms: terms.into_iter().map(Real::to_f64_lossy).collect(),
    })
}

pub fn chow_norm(f: &QForm, cfg: &HeightConfig) -> Result<ChowNorm> {
    match cfg.precision {
        Precision::Double => chow_norm_in::<f64>(f, cfg.roots),
        Precision::Extended => chow_norm_in::<Ext>(f, cfg.roots),
    }
}

/// `chowh(f) = −log‖s‖_Ch(f)`.
pub fn chow_height(f: &QForm, cfg: &HeightConfig) -> Result<f64> {
    Ok(chow_norm(f, cfg)?.chow_height())
}

/// Height of the zero-cycle of `f` normalized by its degree,
/// `(chowh(f) − Σ_p log max_i |aᵢ|_p) / d`. Invariant under scaling `f`.
pub fn git_height_point(f: &QForm, cfg: &HeightConfig) -> Result<f64> {
    let finite = naive_height(f)?.finite.to_f64();
    Ok((chow_height(f, cfg)? - finite) / f.degree() as f64)
}

/// `cih` read through the decomposition: finite invariant part, archimedean
/// invariant maximum, and the Chow norm of `f`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CihDecomposition {
    pub finite: LogValue,
    pub invariant_archimedean: f64,
    pub log_chow_norm: f64,
}

impl CihDecomposition {
    pub fn value(&self) -> f64 {
        self.finite.to_f64() + self.invariant_archimedean + self.log_chow_norm
    }
}

fn semistable_invariants(f: &QForm) -> Result<InvariantPoint> {
    let xi = evaluate_invariants(f)?;
    if xi.is_nullcone() {
        return Err(nullcone(f, "invariant height is infinite")?);
    }
    Ok(xi)
}

/// `Σ_p log max_j |ξ_j|_p^{1/q_j}`, from the factorization of every nonzero
/// invariant value.
fn invariant_finite_part(xi: &InvariantPoint) -> Result<LogValue> {
    let mut per_prime: std::collections::BTreeMap<BigUint, Vec<(i64, u32)>> = Default::default();
    let nonzero: Vec<(&BigRational, u32)> = xi
        .values
        .iter()
        .zip(xi.weights.as_slice().iter().copied())
        .filter(|(v, _)| !v.is_zero())
        .collect();
    for (k, (v, q)) in nonzero.iter().enumerate() {
        for (p, e) in factorize_rational(v)?.factors() {
            per_prime.entry(p.clone()).or_insert_with(|| vec![(0, 0); nonzero.len()])[k] = (*e, *q);
        }
    }
    let mut out = LogValue::zero();
    for (p, vals) in per_prime {
        let best = vals
            .iter()
            .zip(&nonzero)
            .map(|(&(e, _), &(_, q))| BigRational::new((-e).into(), (q as i64).into()))
            .max()
            .unwrap();
        out.add_term(p, best);
    }
    Ok(out)
}

fn invariant_archimedean(xi: &InvariantPoint) -> f64 {
    xi.values
        .iter()
        .zip(xi.weights.as_slice())
        .filter(|(v, _)| !v.is_zero())
        .map(|(v, &q)| ln_abs_rational(v) / q as f64)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// The Chow-invariant height in the reading compatible with the
/// decomposition `lwh(ξ(f)) = cih(f) + chowh(f)`.
///
/// Note `cih_decomposition(λf) = cih_decomposition(f) + log|λ|`.
pub fn cih_decomposition(f: &QForm, cfg: &HeightConfig) -> Result<CihDecomposition> {
    let xi = semistable_invariants(f)?;
    Ok(CihDecomposition {
        finite: invariant_finite_part(&xi)?,
        invariant_archimedean: invariant_archimedean(&xi),
        log_chow_norm: chow_norm(f, cfg)?.log_norm,
    })
}

/// The reading `Σ_ν (1/δ) log max_j |ξ_j|_ν^{δ/q_j}` without a Chow term.
pub fn cih_naive(f: &QForm) -> Result<f64> {
    let xi = semistable_invariants(f)?;
    let delta = xi.weights.delta() as f64;
    let arch = xi
        .values
        .iter()
        .zip(xi.weights.as_slice())
        .filter(|(v, _)| !v.is_zero())
        .map(|(v, &q)| delta / q as f64 * ln_abs_rational(v))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(invariant_finite_part(&xi)?.to_f64() + arch / delta)
}

/// Closed form for `x^d − a₀y^d`:
/// `(1/(2d−2)) log(d^d |a₀|^{d−1}) − (d/(2(2d−2))) log(1 + |a₀|^{2/d})`.
pub fn cih_closed_form(d: usize, a0: &BigRational) -> Result<f64> {
    if d < 3 {
        return Err(Error::UnsupportedDegree {
            degree: d,
            supported: "closed form needs degree >= 3",
        });
    }
    if a0.is_zero() {
        return Err(Error::Zero("a0"));
    }
    let (df, r) = (d as f64, (2 * d - 2) as f64);
    let la = ln_abs_rational(a0);
    let first = (df * df.ln() + (df - 1.0) * la) / r;
    let second = df / (2.0 * r) * (2.0 * la / df).exp().ln_1p();
    Ok(first - second)
}

/// Reference value quoted for `x³ − y³` under the thesis normalization.
pub const CIH_THESIS_REFERENCE: f64 = 0.215;

/// `a₀` when `f = x^d − a₀y^d`.
pub fn power_form_parameter(f: &QForm) -> Option<BigRational> {
    let d = f.degree();
    let c = f.coeffs();
    let monic = c[d] == BigRational::from_integer(1.into());
    (monic && !c[0].is_zero() && c[1..d].iter().all(Zero::is_zero)).then(|| -c[0].clone())
}

/// Both coefficient variants of the cubic formula
/// `(1/4) Σ_p log|Δ|_p + k·(log|Δ| − ½ Σ log(|xᵢ|² + |yᵢ|²))`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CubicCih {
    /// `k = 1/4`.
    pub proof: f64,
    /// `k = 1/2`.
    pub statement: f64,
    pub differ: bool,
}

pub fn cih_cubic_closed_form(f: &QForm, cfg: &HeightConfig) -> Result<CubicCih> {
    if f.degree() != 3 {
        return Err(Error::UnsupportedDegree {
            degree: f.degree(),
            supported: "the cubic formula needs degree 3",
        });
    }
    if !f.is_integral() {
        return Err(Error::NotIntegral);
    }
    let disc = discriminant(f)?;
    if disc.is_zero() {
        return Err(Error::RepeatedRoots("cubic formula needs a nonzero discriminant"));
    }
    let mut finite = LogValue::zero();
    for (p, e) in factorize_rational(&disc)?.factors() {
        finite.add_term(p.clone(), BigRational::from_integer((-e).into()));
    }
    let norm = chow_norm(f, cfg)?;
    let bracket = ln_abs_rational(&disc) - norm.root_terms.iter().sum::<f64>();
    let fin = finite.to_f64() / 4.0;
    let proof = fin + bracket / 4.0;
    let statement = fin + bracket / 2.0;
    Ok(CubicCih {
        proof,
        statement,
        differ: (proof - statement).abs() > 1e-12,
    })
}

/// Roots and leading scalar in `f64`, computed at the configured precision.
pub fn roots_f64(f: &QForm, cfg: &HeightConfig) -> Result<RootDivisor<f64>> {
    Ok(match cfg.precision {
        Precision::Double => roots_with::<f64>(f, cfg.roots)?,
        Precision::Extended => roots_with::<Ext>(f, cfg.roots)?.to_f64(),
    })
}

#[cfg(test)]
mod tests;
