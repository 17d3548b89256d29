//! Resultants of binary forms and the discriminant.

use super::BinaryForm;
use crate::error::{Error, Result};
use crate::scalar::Field;

/// Homogeneous resultant via the Sylvester determinant, with the formal
/// degrees of both forms (leading zeros are not dropped).
pub fn resultant<T: Field>(f: &BinaryForm<T>, g: &BinaryForm<T>) -> T {
    let (m, n) = (f.degree(), g.degree());
    let size = m + n;
    if size == 0 {
        return T::one();
    }
    let mut rows = vec![vec![T::zero(); size]; size];
    // x-descending coefficient order
    let fd: Vec<T> = f.coeffs().iter().rev().cloned().collect();
    let gd: Vec<T> = g.coeffs().iter().rev().cloned().collect();
    for r in 0..n {
        for (k, c) in fd.iter().enumerate() {
            rows[r][r + k] = c.clone();
        }
    }
    for r in 0..m {
        for (k, c) in gd.iter().enumerate() {
            rows[n + r][r + k] = c.clone();
        }
    }
    determinant(rows)
}

pub(crate) fn determinant<T: Field>(mut a: Vec<Vec<T>>) -> T {
    let n = a.len();
    let mut det = T::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return T::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det = det * p.clone();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone() / p.clone();
            #[allow(clippy::needless_range_loop)]
            for k in col..n {
                let v = a[col][k].clone();
                a[r][k] = a[r][k].clone() - factor.clone() * v;
            }
        }
    }
    det
}

/// The discriminant, a fixed multiple of `Res(∂f/∂x, ∂f/∂y)` normalized so
/// that `Δ(x^d − a·y^d) = (−1)^{d(d−1)/2} d^d a^{d−1}`.
pub fn discriminant<T: Field>(f: &BinaryForm<T>) -> Result<T> {
    let d = f.degree();
    if d < 2 {
        return Err(Error::UnsupportedDegree {
            degree: d,
            supported: "discriminant needs degree >= 2",
        });
    }
    let mut model = vec![T::zero(); d + 1];
    model[0] = -T::one();
    model[d] = T::one();
    let model = BinaryForm::covariant(model);
    let base = resultant(&model.partial_x(), &model.partial_y());
    let mut target = T::one();
    for _ in 0..d {
        target = target * T::from_i64(d as i64);
    }
    if (d * (d - 1) / 2) % 2 == 1 {
        target = -target;
    }
    let kappa = target / base;
    Ok(kappa * resultant(&f.partial_x(), &f.partial_y()))
}
