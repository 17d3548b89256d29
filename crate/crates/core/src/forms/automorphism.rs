//! Finite groups of Möbius transformations preserving the roots of a
//! squarefree form.

use num_complex::Complex;

use super::roots::{roots, ProjectivePoint};
use super::{Matrix2, QForm};
use crate::error::{Error, Result};

type C = Complex<f64>;

/// An element of PGL₂(ℂ) acting by `[x : y] ↦ [ax + by : cx + dy]`,
/// scaled so that its largest-modulus entry equals 1.
#[derive(Clone, Debug, PartialEq)]
pub struct MoebiusMap {
    pub matrix: Matrix2<C>,
}

impl MoebiusMap {
    pub fn new(m: Matrix2<C>) -> Result<Self> {
        if m.det().norm() == 0.0 {
            return Err(Error::SingularMatrix);
        }
        let big = [m.a, m.b, m.c, m.d]
            .into_iter()
            .max_by(|u, v| u.norm().total_cmp(&v.norm()))
            .unwrap();
        Ok(MoebiusMap {
            matrix: Matrix2::new(m.a / big, m.b / big, m.c / big, m.d / big),
        })
    }

    pub fn identity() -> Self {
        MoebiusMap {
            matrix: Matrix2::identity(),
        }
    }

    pub fn apply(&self, p: &ProjectivePoint<f64>) -> ProjectivePoint<f64> {
        let m = &self.matrix;
        normalize(m.a * p.x + m.b * p.y, m.c * p.x + m.d * p.y)
    }

    pub fn compose(&self, other: &Self) -> Self {
        MoebiusMap::new(self.matrix.mul(&other.matrix)).expect("product of invertible maps")
    }

    pub fn inverse(&self) -> Self {
        MoebiusMap::new(self.matrix.adjugate()).expect("invertible map")
    }

    /// Equality in PGL₂: all 2×2 minors of the stacked entries vanish.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let e = |m: &Matrix2<C>| {
            let v = [m.a, m.b, m.c, m.d];
            let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v.map(|z| z / n)
        };
        let (u, v) = (e(&self.matrix), e(&other.matrix));
        (0..4).all(|i| (0..4).all(|j| (u[i] * v[j] - u[j] * v[i]).norm() <= tol))
    }
}

fn normalize(x: C, y: C) -> ProjectivePoint<f64> {
    if y.norm() <= 1e-300 || x.norm() > 1e12 * y.norm() {
        ProjectivePoint::infinity()
    } else {
        ProjectivePoint::finite(x / y)
    }
}

/// The automorphism group with the induced permutations of the roots.
#[derive(Clone, Debug)]
pub struct AutomorphismGroup {
    pub roots: Vec<ProjectivePoint<f64>>,
    pub maps: Vec<MoebiusMap>,
    /// `permutations[g][i]` is the index of the image of root `i` under map `g`.
    pub permutations: Vec<Vec<usize>>,
    /// Orbits of the group on the roots, as sorted index lists.
    pub orbits: Vec<Vec<usize>>,
}

impl AutomorphismGroup {
    pub fn order(&self) -> usize {
        self.maps.len()
    }

    pub fn contains(&self, m: &MoebiusMap, tol: f64) -> bool {
        self.maps.iter().any(|g| g.approx_eq(m, tol))
    }

    /// Closure under composition and inversion, up to `tol`.
    pub fn is_closed(&self, tol: f64) -> bool {
        self.maps.iter().all(|g| {
            self.contains(&g.inverse(), tol)
                && self.maps.iter().all(|h| self.contains(&g.compose(h), tol))
        })
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(Vec::len).collect()
    }
}

// columns λ₁u₁, λ₂u₂ with λ₁u₁ + λ₂u₂ = u₃: sends 0, ∞, 1 to u₂, u₁, u₃
fn frame(u1: &ProjectivePoint<f64>, u2: &ProjectivePoint<f64>, u3: &ProjectivePoint<f64>) -> Option<Matrix2<C>> {
    let det = u1.x * u2.y - u2.x * u1.y;
    if det.norm() < 1e-14 {
        return None;
    }
    let l1 = (u3.x * u2.y - u2.x * u3.y) / det;
    let l2 = (u1.x * u3.y - u3.x * u1.y) / det;
    Some(Matrix2::new(l1 * u1.x, l2 * u2.x, l1 * u1.y, l2 * u2.y))
}

/// All Möbius maps permuting the roots of a squarefree form of degree ≥ 3.
pub fn automorphism_group(f: &QForm, tol: f64) -> Result<AutomorphismGroup> {
    let d = f.degree();
    if d < 3 {
        return Err(Error::UnsupportedDegree {
            degree: d,
            supported: "automorphism groups need degree >= 3",
        });
    }
    let div = roots(f)?;
    if div.max_multiplicity() > 1 {
        return Err(Error::RepeatedRoots("automorphism group needs distinct roots"));
    }
    let pts: Vec<ProjectivePoint<f64>> = div.roots.into_iter().map(|r| r.point).collect();
    let source = frame(&pts[0], &pts[1], &pts[2]).ok_or(Error::RepeatedRoots("coincident roots"))?;
    let source_inv = Matrix2::new(source.d, -source.b, -source.c, source.a);

    let mut maps: Vec<MoebiusMap> = Vec::new();
    let mut perms = Vec::new();
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                if i == j || j == k || i == k {
                    continue;
                }
                let Some(target) = frame(&pts[i], &pts[j], &pts[k]) else {
                    continue;
                };
                let m = MoebiusMap::new(target.mul(&source_inv))?;
                let Some(perm) = induced_permutation(&m, &pts, tol) else {
                    continue;
                };
                if !maps.iter().any(|g| g.approx_eq(&m, tol)) {
                    maps.push(m);
                    perms.push(perm);
                }
            }
        }
    }
    let orbits = orbits(d, &perms);
    Ok(AutomorphismGroup {
        roots: pts,
        maps,
        permutations: perms,
        orbits,
    })
}

fn induced_permutation(m: &MoebiusMap, pts: &[ProjectivePoint<f64>], tol: f64) -> Option<Vec<usize>> {
    let mut perm = Vec::with_capacity(pts.len());
    let mut hit = vec![false; pts.len()];
    for p in pts {
        let img = m.apply(p);
        let (best, dist) = pts
            .iter()
            .enumerate()
            .map(|(i, q)| (i, img.chordal_distance(q)))
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        if dist > tol || hit[best] {
            return None;
        }
        hit[best] = true;
        perm.push(best);
    }
    Some(perm)
}

fn orbits(n: usize, perms: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for perm in perms {
        for (i, &j) in perm.iter().enumerate() {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut roots_of = Vec::with_capacity(n);
    for i in 0..n {
        let r = find(&mut parent, i);
        roots_of.push(r);
        match out.iter().position(|o: &Vec<usize>| roots_of[o[0]] == r) {
            Some(k) => out[k].push(i),
            None => out.push(vec![i]),
        }
    }
    out
}

impl Default for MoebiusMap {
    fn default() -> Self {
        Self::identity()
    }
}
