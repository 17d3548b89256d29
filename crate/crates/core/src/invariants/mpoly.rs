//! Sparse multivariate polynomials over ℚ in the coefficients `a₀..a_d`.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::{QAlgebra, Ring};

/// Exponent vectors are stored without trailing zeros.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct MPoly {
    terms: BTreeMap<Vec<u16>, BigRational>,
}

fn trim(mut e: Vec<u16>) -> Vec<u16> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

impl MPoly {
    pub fn var(i: usize) -> Self {
        let mut e = vec![0u16; i + 1];
        e[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, BigRational::one());
        MPoly { terms }
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        MPoly { terms }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u16], &BigRational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    /// Total degree of the first term (the tables built here are homogeneous).
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next().map(|e| e.iter().map(|&k| k as u32).sum())
    }

    fn add_term(&mut self, e: Vec<u16>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Value at `a = vals`, in any ℚ-algebra.
    pub fn evaluate<T: QAlgebra>(&self, vals: &[T]) -> T {
        let maxe = self
            .terms
            .keys()
            .flat_map(|e| e.iter().copied())
            .max()
            .unwrap_or(0) as usize;
        let powers: Vec<Vec<T>> = vals
            .iter()
            .map(|v| {
                let mut p = Vec::with_capacity(maxe + 1);
                let mut acc = T::one();
                for _ in 0..=maxe {
                    p.push(acc.clone());
                    acc = acc * v.clone();
                }
                p
            })
            .collect();
        let mut total = T::zero();
        for (e, c) in &self.terms {
            let mut t = T::one();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t * powers[i][k as usize].clone();
                }
            }
            total = total + t.mul_rational(c);
        }
        total
    }
}

impl Zero for MPoly {
    fn zero() -> Self {
        MPoly::default()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for MPoly {
    fn one() -> Self {
        MPoly::constant(BigRational::one())
    }
}

impl Add for MPoly {
    type Output = MPoly;
    fn add(mut self, rhs: MPoly) -> MPoly {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl Sub for MPoly {
    type Output = MPoly;
    fn sub(self, rhs: MPoly) -> MPoly {
        self + (-rhs)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for MPoly {
    type Output = MPoly;
    fn mul(self, rhs: MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let n = e1.len().max(e2.len());
                let e: Vec<u16> = (0..n)
                    .map(|i| e1.get(i).copied().unwrap_or(0) + e2.get(i).copied().unwrap_or(0))
                    .collect();
                out.add_term(trim(e), c1 * c2);
            }
        }
        out
    }
}

impl Ring for MPoly {
    fn from_i64(n: i64) -> Self {
        MPoly::constant(BigRational::from_integer(n.into()))
    }
}

impl QAlgebra for MPoly {
    fn mul_rational(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * q)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    #[test]
    fn arithmetic_and_evaluation() {
        let (a, b) = (MPoly::var(0), MPoly::var(1));
        let p = (a.clone() + b.clone()) * (a.clone() - b.clone());
        assert_eq!(p.len(), 2);
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.evaluate(&[int(5), int(3)]), int(16));
        assert!((p.clone() - p).is_zero());
    }
}
