//! Binary forms `f(x, y) = Σ aᵢ xⁱ y^{d−i}` and their basic operations.
//!
//! Coefficient `i` always multiplies `xⁱ y^{d−i}`, so the leading coefficient
//! in `x` is the last entry.

mod automorphism;
mod discriminant;
mod modp;
mod parse;
mod roots;
mod stability;
pub(crate) mod upoly;

pub use automorphism::{automorphism_group, AutomorphismGroup, MoebiusMap};
pub use discriminant::{discriminant, resultant};
pub use modp::{max_multiplicity_mod_p, reduction_semistable_at};
pub use parse::parse_form;
pub use roots::{from_divisor, roots, roots_with, ProjectivePoint, Root, RootConfig, RootDivisor};
pub use stability::{is_semistable, is_stable, max_multiplicity, multiplicities, Multiplicities};

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{gcd_all, lcm_all};
use crate::error::{Error, Result};
use crate::scalar::{rational_to_f64, Field, Ring};

/// A binary form of degree `d` with coefficients `a₀..a_d`.
///
/// Forms built with [`BinaryForm::new`] are nonzero. Covariants produced by
/// transvectants may vanish identically; those come from
/// [`BinaryForm::covariant`].
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryForm<T> {
    coeffs: Vec<T>,
}

impl<T: Ring> BinaryForm<T> {
    pub fn new(coeffs: Vec<T>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::UnsupportedDegree {
                degree: coeffs.len().saturating_sub(1),
                supported: "binary forms need degree >= 1",
            });
        }
        if coeffs.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroForm);
        }
        Ok(BinaryForm { coeffs })
    }

    /// Degree-`coeffs.len() - 1` form that is allowed to be zero.
    pub fn covariant(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a form needs at least one coefficient");
        BinaryForm { coeffs }
    }

    pub fn zero(degree: usize) -> Self {
        BinaryForm {
            coeffs: vec![T::zero(); degree + 1],
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &T {
        &self.coeffs[i]
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> BinaryForm<U> {
        BinaryForm {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn evaluate(&self, x: &T, y: &T) -> T {
        // Horner in x/y, homogenized
        let d = self.degree();
        let mut acc = T::zero();
        let mut ypow = T::one();
        let mut ypows = Vec::with_capacity(d + 1);
        for _ in 0..=d {
            ypows.push(ypow.clone());
            ypow = ypow * y.clone();
        }
        let mut xpow = T::one();
        for (i, a) in self.coeffs.iter().enumerate() {
            acc = acc + a.clone() * xpow.clone() * ypows[d - i].clone();
            xpow = xpow * x.clone();
        }
        acc
    }

    pub fn scale(&self, lambda: &T) -> Self {
        self.map(|c| c.clone() * lambda.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c.clone())
    }

    /// The product form, of degree `deg f + deg g`.
    pub fn mul(&self, other: &Self) -> Self {
        BinaryForm {
            coeffs: convolve(&self.coeffs, &other.coeffs),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree(), other.degree());
        BinaryForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    /// `∂f/∂x`, a form of degree `d − 1` (degree 0 forms map to the zero constant).
    pub fn partial_x(&self) -> Self {
        let d = self.degree();
        if d == 0 {
            return BinaryForm::zero(0);
        }
        BinaryForm {
            coeffs: (0..d)
                .map(|i| self.coeffs[i + 1].clone() * T::from_i64((i + 1) as i64))
                .collect(),
        }
    }

    /// `∂f/∂y`, a form of degree `d − 1`.
    pub fn partial_y(&self) -> Self {
        let d = self.degree();
        if d == 0 {
            return BinaryForm::zero(0);
        }
        BinaryForm {
            coeffs: (0..d)
                .map(|i| self.coeffs[i].clone() * T::from_i64((d - i) as i64))
                .collect(),
        }
    }

    /// `f^M(x, y) = f(ax + by, cx + dy)`.
    ///
    /// This is a right action: `f^{M₁M₂} = (f^{M₁})^{M₂}`.
    pub fn act(&self, m: &Matrix2<T>) -> Result<Self> {
        if m.det().is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(self.substitute(m))
    }

    /// Substitution without the determinant check.
    pub(crate) fn substitute(&self, m: &Matrix2<T>) -> Self {
        let d = self.degree();
        // linear forms in (y, x) ascending-x coefficient order
        let u = vec![m.b.clone(), m.a.clone()];
        let v = vec![m.d.clone(), m.c.clone()];
        let mut upow = vec![vec![T::one()]];
        let mut vpow = vec![vec![T::one()]];
        for k in 0..d {
            upow.push(convolve(&upow[k], &u));
            vpow.push(convolve(&vpow[k], &v));
        }
        let mut out = vec![T::zero(); d + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let term = convolve(&upow[i], &vpow[d - i]);
            for (o, t) in out.iter_mut().zip(term) {
                *o = o.clone() + a.clone() * t;
            }
        }
        BinaryForm { coeffs: out }
    }

    /// Coefficients reversed: `f(y, x)`.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        BinaryForm { coeffs: c }
    }
}

impl<T: Field> BinaryForm<T> {
    pub fn div_scalar(&self, lambda: &T) -> Self {
        self.map(|c| c.clone() / lambda.clone())
    }
}

pub(crate) fn convolve<T: Ring>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

/// Forms with exact rational coefficients.
pub type QForm = BinaryForm<BigRational>;

impl BinaryForm<BigRational> {
    pub fn from_integers(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// `(primitive, content)` with `f = content · primitive`, the primitive
    /// form integral with coprime coefficients and positive leading
    /// (highest-index nonzero) coefficient.
    pub fn primitive_part(&self) -> Result<(Self, BigRational)> {
        if self.is_zero() {
            return Err(Error::ZeroForm);
        }
        let dens: Vec<BigInt> = self.coeffs.iter().map(|c| c.denom().clone()).collect();
        let l = lcm_all(&dens);
        let scaled: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
            .collect();
        let mut g = gcd_all(&scaled);
        let lead = scaled.iter().rev().find(|c| !c.is_zero()).expect("nonzero form");
        if lead.is_negative() {
            g = -g;
        }
        let prim: Vec<BigRational> = scaled
            .iter()
            .map(|c| BigRational::from_integer(c.div_floor(&g)))
            .collect();
        let content = BigRational::new(g, l);
        Ok((BinaryForm { coeffs: prim }, content))
    }

    pub fn to_complex(&self) -> BinaryForm<Complex<f64>> {
        self.map(|c| Complex::new(rational_to_f64(c), 0.0))
    }

    /// Value at complex `(x, y)`, coefficients rounded to `f64`.
    pub fn evaluate_complex(&self, x: Complex<f64>, y: Complex<f64>) -> Complex<f64> {
        self.to_complex().evaluate(&x, &y)
    }

    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }
}

impl fmt::Display for BinaryForm<BigRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut first = true;
        for i in (0..=d).rev() {
            let c = &self.coeffs[i];
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mono = monomial(i, d - i);
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn monomial(i: usize, j: usize) -> String {
    let p = |v: &str, e: usize| match e {
        0 => String::new(),
        1 => v.to_string(),
        _ => format!("{v}^{e}"),
    };
    match (p("x", i), p("y", j)) {
        (a, b) if a.is_empty() => b,
        (a, b) if b.is_empty() => a,
        (a, b) => format!("{a}*{b}"),
    }
}

/// A 2×2 matrix `[[a, b], [c, d]]` acting by `(x, y) ↦ (ax + by, cx + dy)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Ring> Matrix2<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Matrix2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Matrix2::new(T::one(), T::zero(), T::zero(), T::one())
    }

    pub fn det(&self) -> T {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    pub fn is_sl2(&self) -> bool {
        self.det() == T::one()
    }

    pub fn mul(&self, o: &Self) -> Self {
        Matrix2 {
            a: self.a.clone() * o.a.clone() + self.b.clone() * o.c.clone(),
            b: self.a.clone() * o.b.clone() + self.b.clone() * o.d.clone(),
            c: self.c.clone() * o.a.clone() + self.d.clone() * o.c.clone(),
            d: self.c.clone() * o.b.clone() + self.d.clone() * o.d.clone(),
        }
    }

    /// The adjugate `[[d, −b], [−c, a]]`, inverse up to the determinant.
    pub fn adjugate(&self) -> Self {
        Matrix2::new(self.d.clone(), -self.b.clone(), -self.c.clone(), self.a.clone())
    }
}

impl<T: Field> Matrix2<T> {
    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let adj = self.adjugate();
        Ok(Matrix2::new(
            adj.a / det.clone(),
            adj.b / det.clone(),
            adj.c / det.clone(),
            adj.d / det,
        ))
    }
}

impl Matrix2<BigRational> {
    pub fn from_integers(a: i64, b: i64, c: i64, d: i64) -> Self {
        let r = |v: i64| BigRational::from_integer(v.into());
        Matrix2::new(r(a), r(b), r(c), r(d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use proptest::prelude::*;

    fn q(c: &[i64]) -> QForm {
        QForm::from_integers(c).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let cube = q(&[-1, 0, 0, 1]);
        assert_eq!(cube.evaluate(&int(1), &int(1)), int(0));
        assert_eq!(cube.evaluate(&int(2), &int(0)), int(8));
        let quad = q(&[1, 1, 1]);
        assert_eq!(quad.evaluate(&int(1), &int(-1)), int(1));
        let z = quad.evaluate_complex(Complex::new(0.0, 1.0), Complex::new(1.0, 0.0));
        assert!((z - Complex::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn action_examples() {
        let f = q(&[3, -1, 4, 1]);
        assert_eq!(f.act(&Matrix2::identity()).unwrap(), f);
        let cube = q(&[-1, 0, 0, 1]);
        let swapped = cube.act(&Matrix2::from_integers(0, 1, 1, 0)).unwrap();
        assert_eq!(swapped, q(&[1, 0, 0, -1]));
        assert_eq!(
            cube.act(&Matrix2::from_integers(1, 2, 2, 4)),
            Err(Error::SingularMatrix)
        );
    }

    #[test]
    fn primitive_part_examples() {
        let (p, c) = q(&[-2, 0, 0, 2]).primitive_part().unwrap();
        assert_eq!((p, c), (q(&[-1, 0, 0, 1]), int(2)));
        let f = QForm::new(vec![rat(9, 4), int(0), rat(3, 2)]).unwrap();
        let (p, c) = f.primitive_part().unwrap();
        assert_eq!((p, c), (q(&[3, 0, 2]), rat(3, 4)));
        let (p, c) = q(&[-1, 0, 0, 1]).primitive_part().unwrap();
        assert_eq!((p, c), (q(&[-1, 0, 0, 1]), int(1)));
        let (p, c) = q(&[2, 0, -4]).primitive_part().unwrap();
        assert_eq!((p, c), (q(&[-1, 0, 2]), int(-2)));
    }

    #[test]
    fn rejects_zero_form() {
        assert_eq!(QForm::from_integers(&[0, 0, 0]), Err(Error::ZeroForm));
        assert!(QForm::from_integers(&[1]).is_err());
    }

    #[test]
    fn display_round_trips_through_parser() {
        for c in [&[-1i64, 0, 0, 1][..], &[2, -3, 0, 5, 1], &[0, 1, 0]] {
            let f = q(c);
            assert_eq!(parse_form(&f.to_string(), None).unwrap(), f);
        }
    }

    fn small_form() -> impl Strategy<Value = QForm> {
        (1usize..=6)
            .prop_flat_map(|d| prop::collection::vec(-6i64..=6, d + 1))
            .prop_filter("nonzero", |c| c.iter().any(|&x| x != 0))
            .prop_map(|c| q(&c))
    }

    fn small_matrix() -> impl Strategy<Value = Matrix2<BigRational>> {
        (-4i64..=4, -4i64..=4, -4i64..=4, -4i64..=4)
            .prop_filter("nonsingular", |(a, b, c, d)| a * d - b * c != 0)
            .prop_map(|(a, b, c, d)| Matrix2::from_integers(a, b, c, d))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn act_is_a_right_action(f in small_form(), m1 in small_matrix(), m2 in small_matrix()) {
            let lhs = f.act(&m1.mul(&m2)).unwrap();
            let rhs = f.act(&m1).unwrap().act(&m2).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn act_matches_pointwise_substitution(f in small_form(), m in small_matrix(), x in -5i64..5, y in -5i64..5) {
            let g = f.act(&m).unwrap();
            let (x, y) = (int(x), int(y));
            let xs = m.a.clone() * x.clone() + m.b.clone() * y.clone();
            let ys = m.c.clone() * x.clone() + m.d.clone() * y.clone();
            prop_assert_eq!(g.evaluate(&x, &y), f.evaluate(&xs, &ys));
        }
    }
}
