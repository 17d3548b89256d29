//! Minimization of archimedean norms over SL₂(ℂ), modulo SU(2).

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{Matrix2, ProjectivePoint, QForm, RootDivisor};
use crate::scalar::rational_to_f64;

type C = Complex<f64>;

/// A positive definite Hermitian matrix `[[p11, p12], [p̄12, p22]]` of
/// determinant 1, standing for the coset `SU(2)·M` with `P = M†M`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HermitianCoset {
    pub p11: f64,
    pub p22: f64,
    pub p12: (f64, f64),
}

impl HermitianCoset {
    pub fn identity() -> Self {
        HermitianCoset {
            p11: 1.0,
            p22: 1.0,
            p12: (0.0, 0.0),
        }
    }

    fn off(&self) -> C {
        C::new(self.p12.0, self.p12.1)
    }

    pub fn det(&self) -> f64 {
        self.p11 * self.p22 - self.off().norm_sqr()
    }

    fn from_parts(p11: f64, p22: f64, p12: C) -> Self {
        let det = p11 * p22 - p12.norm_sqr();
        let s = det.sqrt();
        HermitianCoset {
            p11: p11 / s,
            p22: p22 / s,
            p12: (p12.re / s, p12.im / s),
        }
    }

    /// `M†M` scaled to determinant 1.
    pub fn from_matrix(m: &Matrix2<C>) -> Self {
        let (a, b, c, d) = (m.a, m.b, m.c, m.d);
        let p11 = a.norm_sqr() + c.norm_sqr();
        let p22 = b.norm_sqr() + d.norm_sqr();
        let p12 = a.conj() * b + c.conj() * d;
        Self::from_parts(p11, p22, p12)
    }

    /// `v† P v`.
    pub fn quad(&self, v: &ProjectivePoint<f64>) -> f64 {
        self.p11 * v.x.norm_sqr() + self.p22 * v.y.norm_sqr() + 2.0 * (v.x.conj() * self.off() * v.y).re
    }

    /// Frobenius distance to the identity.
    pub fn distance_to_identity(&self) -> f64 {
        ((self.p11 - 1.0).powi(2) + (self.p22 - 1.0).powi(2) + 2.0 * self.off().norm_sqr()).sqrt()
    }

    /// `P^{1/2} = (P + I)/√(tr P + 2)` for determinant 1.
    fn sqrt(&self) -> (f64, f64, C) {
        let s = (self.p11 + self.p22 + 2.0).sqrt();
        ((self.p11 + 1.0) / s, (self.p22 + 1.0) / s, self.off() / s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// `Σ bᵢ log ‖M·pᵢ‖²` over the roots.
    ChowNorm,
    /// `log max_i |coeff(f^M, i)|`.
    CoefficientSup,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ArchMinimum {
    pub objective: Objective,
    pub coset: HermitianCoset,
    /// The minimizing matrix, for objectives not constant on SU(2)-cosets.
    pub matrix: Option<[(f64, f64); 4]>,
    pub min_value: f64,
    pub iterations: usize,
    /// `‖(2/d) P^{1/2} (Σ bᵢ vᵢvᵢ†/(vᵢ†Pvᵢ)) P^{1/2} − I‖`, zero at a balanced point.
    pub balanced_residual: f64,
    /// Objective value after each iteration.
    pub trace: Vec<f64>,
    /// Per-orbit minima when an orbit partition was given.
    pub orbit_values: Vec<f64>,
}

fn unit(p: &ProjectivePoint<f64>) -> (ProjectivePoint<f64>, f64) {
    let n2 = p.norm_sqr();
    let n = n2.sqrt();
    (
        ProjectivePoint {
            x: p.x / n,
            y: p.y / n,
        },
        n2.ln(),
    )
}

struct Config {
    pts: Vec<ProjectivePoint<f64>>,
    mult: Vec<f64>,
    log_norms: Vec<f64>,
}

impl Config {
    fn degree(&self) -> f64 {
        self.mult.iter().sum()
    }

    fn value(&self, p: &HermitianCoset) -> f64 {
        self.pts
            .iter()
            .zip(&self.mult)
            .map(|(v, b)| b * p.quad(v).ln())
            .sum()
    }

    /// `Σ bᵢ vᵢvᵢ† / (vᵢ†Pvᵢ)` as `(s11, s22, s12)`.
    fn scatter(&self, p: &HermitianCoset) -> (f64, f64, C) {
        let (mut s11, mut s22, mut s12) = (0.0, 0.0, C::new(0.0, 0.0));
        for (v, b) in self.pts.iter().zip(&self.mult) {
            let w = b / p.quad(v);
            s11 += w * v.x.norm_sqr();
            s22 += w * v.y.norm_sqr();
            s12 += v.x * v.y.conj() * w;
        }
        (s11, s22, s12)
    }

    fn residual(&self, p: &HermitianCoset) -> f64 {
        let (s11, s22, s12) = self.scatter(p);
        let (r11, r22, r12) = p.sqrt();
        // R S R with R = [[r11, r12], [r̄12, r22]]
        let k = 2.0 / self.degree();
        let rs11 = C::new(r11 * s11, 0.0) + r12 * s12.conj();
        let rs12 = s12 * r11 + r12 * s22;
        let rs21 = r12.conj() * s11 + s12.conj() * r22;
        let rs22 = r12.conj() * s12 + C::new(r22 * s22, 0.0);
        let m11 = rs11 * r11 + rs12 * r12.conj();
        let m12 = rs11 * r12 + rs12 * r22;
        let m22 = rs21 * r12 + rs22 * r22;
        let e11 = k * m11.re - 1.0;
        let e22 = k * m22.re - 1.0;
        (e11 * e11 + e22 * e22 + 2.0 * (m12 * k).norm_sqr()).sqrt()
    }
}

/// Minimizes `Σ bᵢ log ‖M·pᵢ‖²` over `M ∈ SL₂(ℂ)` for the root divisor, by the
/// fixed-point iteration `P ← (Σ bᵢ vᵢvᵢ†/(vᵢ†Pvᵢ))⁻¹` on determinant-1
/// Hermitian matrices. With an orbit partition each orbit is minimized on
/// its own and the minima are summed.
pub fn minimize_chow_norm(
    div: &RootDivisor<f64>,
    orbits: Option<&[Vec<usize>]>,
    max_iter: usize,
) -> Result<ArchMinimum> {
    let all: Vec<usize> = (0..div.roots.len()).collect();
    let parts: Vec<Vec<usize>> = match orbits {
        Some(o) => o.to_vec(),
        None => vec![all],
    };
    let mut total = 0.0;
    let mut orbit_values = Vec::new();
    let mut last = None;
    let mut iterations = 0;
    let mut trace = Vec::new();
    for part in &parts {
        let (val, coset, it, res, tr) = minimize_part(div, part, max_iter)?;
        total += val;
        orbit_values.push(val);
        iterations += it;
        trace = tr;
        last = Some((coset, res));
    }
    let (coset, residual) = last.unwrap_or((HermitianCoset::identity(), 0.0));
    Ok(ArchMinimum {
        objective: Objective::ChowNorm,
        coset,
        matrix: None,
        min_value: total,
        iterations,
        balanced_residual: residual,
        trace,
        orbit_values,
    })
}

type PartResult = (f64, HermitianCoset, usize, f64, Vec<f64>);

fn minimize_part(div: &RootDivisor<f64>, idx: &[usize], max_iter: usize) -> Result<PartResult> {
    let mut cfg = Config {
        pts: Vec::new(),
        mult: Vec::new(),
        log_norms: Vec::new(),
    };
    for &i in idx {
        let r = &div.roots[i];
        let (u, ln) = unit(&r.point);
        cfg.pts.push(u);
        cfg.mult.push(r.multiplicity as f64);
        cfg.log_norms.push(ln);
    }
    let d = cfg.degree();
    let heaviest = cfg.mult.iter().cloned().fold(0.0, f64::max);
    if idx.len() < 2 || 2.0 * heaviest > d {
        return Err(Error::Nullcone {
            degree: d as usize,
            max_multiplicity: heaviest as usize,
            what: "Chow norm is unbounded below on this configuration",
        });
    }
    let offset: f64 = cfg.mult.iter().zip(&cfg.log_norms).map(|(b, l)| b * l).sum();
    let mut p = HermitianCoset::identity();
    let mut trace = vec![cfg.value(&p)];
    let mut res = cfg.residual(&p);
    let mut it = 0;
    while res >= 1e-10 {
        if it >= max_iter {
            return Err(Error::NonConvergence {
                iterations: it,
                residual: res,
            });
        }
        let (s11, s22, s12) = cfg.scatter(&p);
        p = HermitianCoset::from_parts(s22, s11, -s12);
        it += 1;
        trace.push(cfg.value(&p));
        res = cfg.residual(&p);
    }
    Ok((cfg.value(&p) + offset, p, it, res, trace))
}

fn sl2_from(params: &[f64; 8]) -> Option<Matrix2<C>> {
    let m = Matrix2::new(
        C::new(params[0], params[1]),
        C::new(params[2], params[3]),
        C::new(params[4], params[5]),
        C::new(params[6], params[7]),
    );
    let det = m.det();
    if det.norm() < 1e-8 {
        return None;
    }
    let s = det.sqrt();
    Some(Matrix2::new(m.a / s, m.b / s, m.c / s, m.d / s))
}

fn coefficient_sup(f: &crate::forms::BinaryForm<C>, m: &Matrix2<C>) -> f64 {
    f.substitute(m)
        .coeffs()
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max)
        .ln()
}

/// Minimizes `log max_i |coeff(f^M, i)|` over `M ∈ SL₂(ℂ)` by Nelder–Mead with
/// deterministic restarts.
pub fn minimize_coefficient_sup(f: &QForm, restarts: usize, max_iter: usize) -> Result<ArchMinimum> {
    let fc = f.map(|c| C::new(rational_to_f64(c), 0.0));
    let obj = |x: &[f64; 8]| match sl2_from(x) {
        Some(m) => coefficient_sup(&fc, &m),
        None => f64::INFINITY,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut best = ([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0], obj(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0]));
    let mut trace = vec![best.1];
    let mut iterations = 0;
    for r in 0..restarts.max(1) {
        let start = if r == 0 {
            best.0
        } else {
            let mut s = best.0;
            for v in s.iter_mut() {
                *v += rng.gen_range(-0.5..0.5);
            }
            s
        };
        let (x, v, it) = nelder_mead(&obj, start, 0.3, max_iter);
        iterations += it;
        if v < best.1 {
            best = (x, v);
        }
        trace.push(best.1);
    }
    let m = sl2_from(&best.0).ok_or(Error::SingularMatrix)?;
    let entries = [m.a, m.b, m.c, m.d].map(|z| (z.re, z.im));
    Ok(ArchMinimum {
        objective: Objective::CoefficientSup,
        coset: HermitianCoset::from_matrix(&m),
        matrix: Some(entries),
        min_value: best.1,
        iterations,
        balanced_residual: f64::NAN,
        trace,
        orbit_values: Vec::new(),
    })
}

fn nelder_mead(obj: &impl Fn(&[f64; 8]) -> f64, start: [f64; 8], step: f64, max_iter: usize) -> ([f64; 8], f64, usize) {
    const N: usize = 8;
    let mut simplex: Vec<([f64; N], f64)> = Vec::with_capacity(N + 1);
    simplex.push((start, obj(&start)));
    for i in 0..N {
        let mut x = start;
        x[i] += step;
        simplex.push((x, obj(&x)));
    }
    let combine = |a: &[f64; N], b: &[f64; N], t: f64| {
        let mut out = [0.0; N];
        for k in 0..N {
            out[k] = a[k] + t * (b[k] - a[k]);
        }
        out
    };
    let mut it = 0;
    while it < max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if (simplex[N].1 - simplex[0].1).abs() < 1e-13 {
            break;
        }
        it += 1;
        let mut centroid = [0.0; N];
        for (x, _) in &simplex[..N] {
            for k in 0..N {
                centroid[k] += x[k] / N as f64;
            }
        }
        let worst = simplex[N];
        let xr = combine(&centroid, &worst.0, -1.0);
        let fr = obj(&xr);
        if fr < simplex[0].1 {
            let xe = combine(&centroid, &worst.0, -2.0);
            let fe = obj(&xe);
            simplex[N] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[N - 1].1 {
            simplex[N] = (xr, fr);
        } else {
            let xc = combine(&centroid, &worst.0, 0.5);
            let fc = obj(&xc);
            if fc < worst.1 {
                simplex[N] = (xc, fc);
            } else {
                let best = simplex[0].0;
                for s in simplex.iter_mut().skip(1) {
                    s.0 = combine(&best, &s.0, 0.5);
                    s.1 = obj(&s.0);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    (simplex[0].0, simplex[0].1, it)
}
