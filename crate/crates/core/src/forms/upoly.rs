//! Dense univariate polynomials over a field, ascending powers.

use crate::scalar::Field;

pub(crate) fn trim<T: Field>(mut p: Vec<T>) -> Vec<T> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

/// Degree, `None` for the zero polynomial.
pub(crate) fn degree<T: Field>(p: &[T]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub(crate) fn derivative<T: Field>(p: &[T]) -> Vec<T> {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.clone() * T::from_i64(i as i64))
            .collect(),
    )
}

pub(crate) fn monic<T: Field>(p: &[T]) -> Vec<T> {
    let p = trim(p.to_vec());
    match p.last() {
        Some(l) => {
            let l = l.clone();
            p.into_iter().map(|c| c / l.clone()).collect()
        }
        None => p,
    }
}

/// `(q, r)` with `a = q·b + r`, `deg r < deg b`.
pub(crate) fn div_rem<T: Field>(a: &[T], b: &[T]) -> (Vec<T>, Vec<T>) {
    let b = trim(b.to_vec());
    let db = degree(&b).expect("division by zero polynomial");
    let mut r = trim(a.to_vec());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let lead = b[db].clone();
    let mut q = vec![T::zero(); r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = r[dr].clone() / lead.clone();
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] = r[shift + i].clone() - c.clone() * bc.clone();
        }
        q[shift] = c;
        r = trim(r);
    }
    (trim(q), r)
}

/// Monic gcd.
pub(crate) fn gcd<T: Field>(a: &[T], b: &[T]) -> Vec<T> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let (_, r) = div_rem(&a, &b);
        a = b;
        b = r;
    }
    monic(&a)
}

/// Yun's squarefree decomposition in characteristic zero: pairs
/// `(gᵢ, i)` with `p = lc · Π gᵢⁱ`, each `gᵢ` monic squarefree of positive
/// degree and pairwise coprime.
pub(crate) fn squarefree_decomposition<T: Field>(p: &[T]) -> Vec<(Vec<T>, usize)> {
    let p = trim(p.to_vec());
    let mut out = Vec::new();
    if degree(&p).unwrap_or(0) == 0 {
        return out;
    }
    let dp = derivative(&p);
    let a0 = gcd(&p, &dp);
    let mut b = div_rem(&p, &a0).0;
    let mut c = div_rem(&dp, &a0).0;
    let mut d = sub(&c, &derivative(&b));
    let mut i = 1;
    loop {
        let a = gcd(&b, &d);
        if degree(&a).unwrap_or(0) > 0 {
            out.push((a.clone(), i));
        }
        b = div_rem(&b, &a).0;
        if degree(&b).unwrap_or(0) == 0 {
            break;
        }
        c = div_rem(&d, &a).0;
        d = sub(&c, &derivative(&b));
        i += 1;
    }
    out
}

fn sub<T: Field>(a: &[T], b: &[T]) -> Vec<T> {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).cloned().unwrap_or_else(T::zero);
                let y = b.get(i).cloned().unwrap_or_else(T::zero);
                x - y
            })
            .collect(),
    )
}
