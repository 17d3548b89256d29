//! Complex projective roots with exact multiplicities, and the inverse map
//! from a divisor back to a form.

use nalgebra::DMatrix;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::upoly::{monic, squarefree_decomposition};
use super::{BinaryForm, QForm};
use crate::error::{Error, Result};
use crate::scalar::{rational_to_f64, Real};

/// A point `[x : y]` of the complex projective line, stored as `(α, 1)` or
/// `(1, 0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectivePoint<T> {
    pub x: Complex<T>,
    pub y: Complex<T>,
}

impl<T: Real> ProjectivePoint<T> {
    pub fn finite(alpha: Complex<T>) -> Self {
        ProjectivePoint {
            x: alpha,
            y: Complex::one(),
        }
    }

    pub fn infinity() -> Self {
        ProjectivePoint {
            x: Complex::one(),
            y: Complex::zero(),
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.y.is_zero()
    }

    /// `|x|² + |y|²`.
    pub fn norm_sqr(&self) -> T {
        self.x.norm_sqr() + self.y.norm_sqr()
    }

    /// Chordal distance on the Riemann sphere, in `[0, 1]`.
    pub fn chordal_distance(&self, other: &Self) -> T {
        let cross = (self.x * other.y - self.y * other.x).norm();
        cross / (self.norm_sqr().sqrt() * other.norm_sqr().sqrt())
    }

    pub fn to_f64(&self) -> ProjectivePoint<f64> {
        let c = |z: &Complex<T>| Complex::new(z.re.to_f64_lossy(), z.im.to_f64_lossy());
        ProjectivePoint {
            x: c(&self.x),
            y: c(&self.y),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Root<T> {
    pub point: ProjectivePoint<T>,
    pub multiplicity: usize,
}

/// The divisor of a form together with the scalar `c` making
/// `f = c · Π (x·yᵢ − y·xᵢ)^{bᵢ}` an identity.
#[derive(Clone, Debug, PartialEq)]
pub struct RootDivisor<T> {
    pub roots: Vec<Root<T>>,
    pub leading: Complex<T>,
}

impl<T: Real> RootDivisor<T> {
    pub fn degree(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn max_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).max().unwrap_or(0)
    }

    pub fn to_f64(&self) -> RootDivisor<f64> {
        RootDivisor {
            roots: self
                .roots
                .iter()
                .map(|r| Root {
                    point: r.point.to_f64(),
                    multiplicity: r.multiplicity,
                })
                .collect(),
            leading: Complex::new(self.leading.re.to_f64_lossy(), self.leading.im.to_f64_lossy()),
        }
    }
}

/// Root finder settings.
#[derive(Clone, Copy, Debug)]
pub struct RootConfig {
    pub max_iter: usize,
}

impl Default for RootConfig {
    fn default() -> Self {
        RootConfig { max_iter: 200 }
    }
}

/// Roots in double precision.
pub fn roots(f: &QForm) -> Result<RootDivisor<f64>> {
    roots_with::<f64>(f, RootConfig::default())
}

/// Roots computed in the working precision `T`.
pub fn roots_with<T: Real>(f: &QForm, cfg: RootConfig) -> Result<RootDivisor<T>> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    let d = f.degree();
    let top = f.coeffs().iter().rposition(|c| !c.is_zero()).unwrap();
    let k = d - top;
    let mut out = Vec::new();
    if top > 0 {
        let p = &f.coeffs()[..=top];
        for (g, mult) in squarefree_decomposition(p) {
            for z in squarefree_roots::<T>(&g, cfg).ok_or_else(|| Error::RootFinder {
                form: f.to_string(),
            })? {
                out.push(Root {
                    point: ProjectivePoint::finite(z),
                    multiplicity: mult,
                });
            }
        }
    }
    if k > 0 {
        out.push(Root {
            point: ProjectivePoint::infinity(),
            multiplicity: k,
        });
    }
    let sign = if k % 2 == 1 { -T::one() } else { T::one() };
    let leading = Complex::new(sign * T::from_rational(&f.coeffs()[top]), T::zero());
    Ok(RootDivisor {
        roots: out,
        leading,
    })
}

/// Roots of a squarefree polynomial: companion eigenvalues in `f64`, then
/// simultaneous Aberth refinement in `T`.
fn squarefree_roots<T: Real>(g: &[BigRational], cfg: RootConfig) -> Option<Vec<Complex<T>>> {
    let g = monic(g);
    let n = g.len() - 1;
    if n == 1 {
        return Some(vec![Complex::new(-T::from_rational(&g[0]), T::zero())]);
    }
    let seeds = companion_seeds(&g);
    let coeffs: Vec<Complex<T>> = g
        .iter()
        .map(|c| Complex::new(T::from_rational(c), T::zero()))
        .collect();
    let mut z: Vec<Complex<T>> = seeds
        .iter()
        .map(|s| Complex::new(T::from_f64_exact(s.re), T::from_f64_exact(s.im)))
        .collect();
    separate(&mut z);
    aberth(&coeffs, &mut z, cfg.max_iter).then_some(z)
}

/// Eigenvalues of the companion matrix, or points on a circle of the
/// Cauchy radius when the Schur iteration does not settle.
fn companion_seeds(g: &[BigRational]) -> Vec<Complex<f64>> {
    let n = g.len() - 1;
    let gf: Vec<f64> = g.iter().map(rational_to_f64).collect();
    let mut comp = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        comp[(i, n - 1)] = -gf[i];
    }
    let ok = |v: &[Complex<f64>]| v.iter().all(|z| z.re.is_finite() && z.im.is_finite());
    if let Some(schur) = comp.try_schur(f64::EPSILON, 2000) {
        let ev: Vec<Complex<f64>> = schur.complex_eigenvalues().iter().copied().collect();
        if ok(&ev) {
            return ev;
        }
    }
    let r = 1.0 + gf[..n].iter().map(|c| c.abs()).fold(0.0, f64::max);
    (0..n)
        .map(|k| Complex::from_polar(r, 0.4 + std::f64::consts::TAU * k as f64 / n as f64))
        .collect()
}

// identical seeds stall Aberth; nudge them apart
fn separate<T: Real>(z: &mut [Complex<T>]) {
    let tiny = T::from_f64_exact(1e-7);
    for i in 0..z.len() {
        for j in 0..i {
            if (z[i] - z[j]).norm() <= tiny * (T::one() + z[i].norm()) {
                let k = T::from_usize(i + 1).unwrap();
                z[i] = z[i] + Complex::new(tiny * k, tiny);
            }
        }
    }
}

fn horner<T: Real>(c: &[Complex<T>], z: Complex<T>) -> (Complex<T>, Complex<T>, T) {
    let mut p = Complex::zero();
    let mut dp = Complex::zero();
    let mut scale = T::zero();
    let az = z.norm();
    for a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + *a;
        scale = scale * az + a.norm();
    }
    (p, dp, scale)
}

fn aberth<T: Real>(c: &[Complex<T>], z: &mut [Complex<T>], max_iter: usize) -> bool {
    let n = z.len();
    let eps = T::eps();
    let hundred = T::from_f64_exact(100.0);
    let mut done = vec![false; n];
    for _ in 0..max_iter {
        let mut all = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp, scale) = horner(c, z[i]);
            if p.norm() <= eps * scale {
                done[i] = true;
                continue;
            }
            let w = p / dp;
            let mut s = Complex::<T>::zero();
            for j in 0..n {
                if j != i {
                    s = s + Complex::<T>::one() / (z[i] - z[j]);
                }
            }
            let step: Complex<T> = w / (Complex::<T>::one() - w * s);
            if !(step.re.is_finite() && step.im.is_finite()) {
                return false;
            }
            z[i] = z[i] - step;
            if step.norm() <= eps * (T::one() + z[i].norm()) {
                done[i] = true;
            } else {
                all = false;
            }
        }
        if all {
            break;
        }
    }
    // normwise backward-error acceptance
    let norm1 = c.iter().fold(T::zero(), |acc, a| acc + a.norm());
    z.iter().all(|&zi| {
        let (p, _, _) = horner(c, zi);
        let r = zi.norm().max(T::one()).powi(n as i32);
        p.norm() <= hundred * T::from_usize(n).unwrap() * eps * norm1 * r
    })
}

/// Expands `c · Π (x·yᵢ − y·xᵢ)^{bᵢ}`.
pub fn from_divisor<T: Real>(div: &RootDivisor<T>) -> BinaryForm<Complex<T>> {
    let mut f = BinaryForm::covariant(vec![div.leading]);
    for r in &div.roots {
        let lin = BinaryForm::covariant(vec![-r.point.x, r.point.y]);
        for _ in 0..r.multiplicity {
            f = f.mul(&lin);
        }
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Ext;
    use proptest::prelude::*;

    fn q(c: &[i64]) -> QForm {
        QForm::from_integers(c).unwrap()
    }

    fn rel_error(f: &QForm, g: &BinaryForm<Complex<f64>>) -> f64 {
        let scale = f
            .coeffs()
            .iter()
            .map(|c| rational_to_f64(c).abs())
            .fold(0.0, f64::max);
        f.coeffs()
            .iter()
            .zip(g.coeffs())
            .map(|(a, b)| (Complex::new(rational_to_f64(a), 0.0) - b).norm())
            .fold(0.0, f64::max)
            / scale
    }

    #[test]
    fn examples() {
        let div = roots(&q(&[1, 0, 1])).unwrap();
        assert_eq!(div.degree(), 2);
        let mut ims: Vec<f64> = div.roots.iter().map(|r| r.point.x.im).collect();
        ims.sort_by(f64::total_cmp);
        assert!((ims[0] + 1.0).abs() < 1e-14 && (ims[1] - 1.0).abs() < 1e-14);

        let div = roots(&q(&[0, 0, 1, 0])).unwrap();
        assert_eq!(div.roots.len(), 2);
        assert!(div.roots[0].point.x.norm() < 1e-15 && div.roots[0].multiplicity == 2);
        assert!(div.roots[1].point.is_infinite() && div.roots[1].multiplicity == 1);

        for d in 3..=9usize {
            let mut c = vec![0i64; d + 1];
            c[0] = -1;
            c[d] = 1;
            let div = roots(&q(&c)).unwrap();
            assert_eq!(div.roots.len(), d);
            for r in &div.roots {
                assert!((r.point.x.norm() - 1.0).abs() < 1e-13);
                assert!((r.point.x.powu(d as u32) - Complex::new(1.0, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn from_divisor_examples() {
        let div = RootDivisor {
            roots: vec![
                Root { point: ProjectivePoint::finite(Complex::new(1.0, 0.0)), multiplicity: 1 },
                Root { point: ProjectivePoint::finite(Complex::new(-1.0, 0.0)), multiplicity: 1 },
            ],
            leading: Complex::new(1.0, 0.0),
        };
        let f = from_divisor(&div);
        assert_eq!(f.coeffs(), &[Complex::new(-1.0, 0.0), Complex::new(0.0, 0.0), Complex::new(1.0, 0.0)]);

        let f = q(&[-2, 0, 0, 1]);
        assert!(rel_error(&f, &from_divisor(&roots(&f).unwrap())) < 1e-9);

        for d in 1..=5usize {
            let div = RootDivisor {
                roots: vec![Root { point: ProjectivePoint::<f64>::infinity(), multiplicity: d }],
                leading: Complex::new(-1.0, 0.0),
            };
            let g = from_divisor(&div);
            let want = if d % 2 == 1 { 1.0 } else { -1.0 };
            assert_eq!(g.coeffs()[0], Complex::new(want, 0.0));
            assert!(g.coeffs()[1..].iter().all(|c| c.norm() == 0.0));
        }
    }

    #[test]
    fn extended_precision_roots() {
        let f = q(&[-2, 0, 0, 1]);
        let div = roots_with::<Ext>(&f, RootConfig::default()).unwrap();
        let real = div
            .roots
            .iter()
            .find(|r| r.point.x.im.abs() < Ext::from(1e-20))
            .unwrap();
        let cube = real.point.x.re * real.point.x.re * real.point.x.re;
        assert!((cube - Ext::from(2.0)).abs() < Ext::from(1e-28));
    }

    #[test]
    fn clustered_roots_converge() {
        // (x - y)(10000x - 10001y)(x + y)(x^2 + y^2)
        let f = [q(&[-1, 1]), q(&[-10001, 10000]), q(&[1, 1]), q(&[1, 0, 1])]
            .iter()
            .fold(QForm::covariant(vec![crate::arith::int(1)]), |acc, g| acc.mul(g));
        let div = roots(&f).unwrap();
        assert!(rel_error(&f, &from_divisor(&div)) < 1e-9);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn round_trip(coeffs in (1usize..=8).prop_flat_map(|d| prop::collection::vec(-10i64..=10, d + 1))) {
            prop_assume!(coeffs.iter().any(|&c| c != 0));
            let f = q(&coeffs);
            let div = roots(&f).unwrap();
            prop_assert_eq!(div.degree(), f.degree());
            prop_assert!(rel_error(&f, &from_divisor(&div)) < 1e-9);
        }
    }
}
