//! Generators of the invariant ring of binary forms of degree 3 to 6 and the
//! weighted point `ξ(f)` they define.
//!
//! Each generator is a fixed transvectant word times a rational scale. The
//! word is expanded once, symbolically in `a₀..a_d`, and evaluation reads the
//! cached coefficient table.

mod mpoly;
mod transvectant;

pub use mpoly::MPoly;
pub use transvectant::transvectant;

use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::rat;
use crate::error::{Error, Result};
use crate::forms::{BinaryForm, QForm};
use crate::scalar::QAlgebra;
use crate::weighted::{WeightedPoint, Weights};

/// One generator: `scale · word(f)`.
#[derive(Clone, Debug)]
pub struct Generator {
    pub name: &'static str,
    pub weight: u32,
    pub word: &'static str,
    pub scale: BigRational,
    /// Smallest positive integer `n` with `n·ξ` integral on integral forms.
    pub denominator: u32,
    table: MPoly,
}

impl Generator {
    pub fn table(&self) -> &MPoly {
        &self.table
    }
}

#[derive(Clone, Debug)]
pub struct InvariantBasis {
    degree: usize,
    generators: Vec<Generator>,
    weights: Weights,
}

#[derive(Clone, Copy)]
struct Spec {
    name: &'static str,
    weight: u32,
    word: &'static str,
    scale: (i64, i64),
    denominator: u32,
}

const fn g(name: &'static str, weight: u32, word: &'static str, scale: (i64, i64), denominator: u32) -> Spec {
    Spec {
        name,
        weight,
        word,
        scale,
        denominator,
    }
}

const CUBIC: [Spec; 1] = [g("Delta", 4, "(H,H)_2, H=(f,f)_2", (27, 2), 1)];
const QUARTIC: [Spec; 2] = [
    g("I", 2, "(f,f)_4", (6, 1), 1),
    g("J", 3, "(f,H)_4, H=(f,f)_2", (72, 1), 1),
];
const QUINTIC: [Spec; 3] = [
    g("I4", 4, "(i,i)_2, i=(f,f)_4", (625, 2), 1),
    g("I8", 8, "(i,tau)_2, j=(f,i)_2, tau=(j,j)_2", (1_562_500, 1), 1),
    g("I12", 12, "(tau,tau)_2", (7_812_500_000, 3), 1),
];
const SEXTIC: [Spec; 4] = [
    g("xi0", 2, "(f,f)_6", (3, 1), 20),
    g("xi1", 4, "(i,i)_4, i=(f,f)_4", (11_250, 1), 1),
    g("xi2", 6, "(i,D)_4, D=(i,i)_2", (562_500, 1), 1),
    g("xi3", 10, "(y3,y1)_2, y1=(f,i)_4, y2=(i,y1)_2, y3=(i,y2)_2", (56_953_125_000, 1), 1),
];

fn specs(d: usize) -> &'static [Spec] {
    match d {
        3 => &CUBIC,
        4 => &QUARTIC,
        5 => &QUINTIC,
        6 => &SEXTIC,
        _ => &[],
    }
}

fn unsupported(d: usize) -> Error {
    Error::UnsupportedDegree {
        degree: d,
        supported: "invariants are implemented for degrees 3, 4, 5, 6",
    }
}

fn constant<T: QAlgebra>(c: Result<BinaryForm<T>>) -> T {
    let c = c.expect("transvectant orders are within range");
    debug_assert_eq!(c.degree(), 0);
    c.coeff(0).clone()
}

/// Unscaled transvectant words, in the order of the generator table.
pub(crate) fn words<T: QAlgebra>(f: &BinaryForm<T>) -> Result<Vec<T>> {
    let t = transvectant;
    Ok(match f.degree() {
        3 => {
            let h = t(f, f, 2)?;
            vec![constant(t(&h, &h, 2))]
        }
        4 => {
            let h = t(f, f, 2)?;
            vec![constant(t(f, f, 4)), constant(t(f, &h, 4))]
        }
        5 => {
            let i = t(f, f, 4)?;
            let j = t(f, &i, 2)?;
            let tau = t(&j, &j, 2)?;
            vec![
                constant(t(&i, &i, 2)),
                constant(t(&i, &tau, 2)),
                constant(t(&tau, &tau, 2)),
            ]
        }
        6 => {
            let i = t(f, f, 4)?;
            let dd = t(&i, &i, 2)?;
            let y1 = t(f, &i, 4)?;
            let y2 = t(&i, &y1, 2)?;
            let y3 = t(&i, &y2, 2)?;
            vec![
                constant(t(f, f, 6)),
                constant(t(&i, &i, 4)),
                constant(t(&i, &dd, 4)),
                constant(t(&y3, &y1, 2)),
            ]
        }
        d => return Err(unsupported(d)),
    })
}

fn build(d: usize) -> InvariantBasis {
    let generic = BinaryForm::covariant((0..=d).map(MPoly::var).collect());
    let tables = words(&generic).expect("supported degree");
    let generators: Vec<Generator> = specs(d)
        .iter()
        .zip(tables)
        .map(|(s, w)| {
            let scale = rat(s.scale.0, s.scale.1);
            Generator {
                name: s.name,
                weight: s.weight,
                word: s.word,
                table: w.mul_rational(&scale),
                scale,
                denominator: s.denominator,
            }
        })
        .collect();
    let weights = Weights::new(generators.iter().map(|g| g.weight).collect()).expect("positive weights");
    InvariantBasis {
        degree: d,
        generators,
        weights,
    }
}

static BASES: [OnceLock<InvariantBasis>; 4] = [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];

/// The cached generator set for degree `d ∈ {3, 4, 5, 6}`.
pub fn invariant_basis(d: usize) -> Result<&'static InvariantBasis> {
    if !(3..=6).contains(&d) {
        return Err(unsupported(d));
    }
    Ok(BASES[d - 3].get_or_init(|| build(d)))
}

impl InvariantBasis {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    fn check(&self, f: &QForm) -> Result<()> {
        if f.degree() != self.degree {
            return Err(Error::Invalid(format!(
                "form of degree {} given to the degree-{} basis",
                f.degree(),
                self.degree
            )));
        }
        Ok(())
    }

    /// Values from the cached coefficient tables.
    pub fn evaluate(&self, f: &QForm) -> Result<InvariantPoint> {
        self.check(f)?;
        Ok(InvariantPoint {
            values: self.generators.iter().map(|g| g.table.evaluate(f.coeffs())).collect(),
            weights: self.weights.clone(),
        })
    }

    /// Values computed by running the transvectant words on `f` directly.
    pub fn evaluate_direct(&self, f: &QForm) -> Result<InvariantPoint> {
        self.check(f)?;
        let raw = words(f)?;
        Ok(InvariantPoint {
            values: raw
                .iter()
                .zip(&self.generators)
                .map(|(v, g)| v * &g.scale)
                .collect(),
            weights: self.weights.clone(),
        })
    }

    /// A one-line description of the generators and their normalizations.
    pub fn describe(&self) -> String {
        let parts: Vec<String> = self
            .generators
            .iter()
            .map(|g| format!("{}[deg {}] = {}*{}", g.name, g.weight, g.scale, g.word))
            .collect();
        format!("d={}: {}", self.degree, parts.join("; "))
    }
}

/// The invariant values `(ξ₀(f), …, ξₙ(f))` with their weights. All values
/// vanish exactly for forms in the nullcone.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantPoint {
    pub values: Vec<BigRational>,
    pub weights: Weights,
}

impl InvariantPoint {
    pub fn is_nullcone(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn to_weighted(&self) -> Result<WeightedPoint> {
        WeightedPoint::new(self.values.clone(), self.weights.clone())
    }
}

/// `ξ(f)` for a form of degree 3 to 6.
pub fn evaluate_invariants(f: &QForm) -> Result<InvariantPoint> {
    invariant_basis(f.degree())?.evaluate(f)
}
