//! Heuristic descent for the minimal naive height in a GL₂(ℤ)-orbit.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::Result;
use crate::forms::{Matrix2, QForm};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Maximal word length in the generators.
    pub max_depth: usize,
    /// Maximal number of expanded nodes.
    pub max_nodes: usize,
    /// Nodes with a coefficient larger than this are not expanded.
    pub max_entry: Option<u128>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_depth: 12,
            max_nodes: 4000,
            max_entry: None,
        }
    }
}

/// Best representative found. `log_height` is an upper bound for the
/// minimal height, never a certified minimum (except when it is 0).
#[derive(Clone, Debug, PartialEq)]
pub struct MinimalHeight {
    pub form: QForm,
    pub log_height: f64,
    pub max_coefficient: BigInt,
    /// `M` with `form ∝ f^M`.
    pub certificate: Matrix2<BigRational>,
    pub expanded: usize,
}

type Mat = [i128; 4];

fn mat_mul(a: &Mat, b: &Mat) -> Option<Mat> {
    let e = |x: i128, y: i128, z: i128, w: i128| x.checked_mul(y)?.checked_add(z.checked_mul(w)?);
    Some([
        e(a[0], b[0], a[1], b[2])?,
        e(a[0], b[1], a[1], b[3])?,
        e(a[2], b[0], a[3], b[2])?,
        e(a[2], b[1], a[3], b[3])?,
    ])
}

/// `f(x + s·y, y)` by repeated synthetic division.
fn shift(c: &[i128], s: i128) -> Option<Vec<i128>> {
    let mut a = c.to_vec();
    let n = a.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            a[j] = a[j].checked_add(a[j + 1].checked_mul(s)?)?;
        }
    }
    Some(a)
}

/// `f(−y, x)`.
fn invert(c: &[i128]) -> Vec<i128> {
    let d = c.len() - 1;
    let mut out = vec![0; d + 1];
    for (i, &a) in c.iter().enumerate() {
        out[d - i] = if i % 2 == 1 { -a } else { a };
    }
    out
}

/// `f(−x, y)`.
fn negate_x(c: &[i128]) -> Vec<i128> {
    c.iter()
        .enumerate()
        .map(|(i, &a)| if i % 2 == 1 { -a } else { a })
        .collect()
}

fn canonical(mut c: Vec<i128>) -> Vec<i128> {
    if c.iter().rev().find(|&&a| a != 0).is_some_and(|&a| a < 0) {
        for a in c.iter_mut() {
            *a = -*a;
        }
    }
    c
}

fn height(c: &[i128]) -> u128 {
    c.iter().map(|a| a.unsigned_abs()).max().unwrap_or(0)
}

const GENERATORS: [Mat; 4] = [[1, 1, 0, 1], [1, -1, 0, 1], [0, -1, 1, 0], [-1, 0, 0, 1]];

fn apply(c: &[i128], g: usize) -> Option<Vec<i128>> {
    match g {
        0 => shift(c, 1),
        1 => shift(c, -1),
        2 => Some(invert(c)),
        _ => Some(negate_x(c)),
    }
}

/// Best-first search over words in the shifts `x ↦ x ± y`, the inversion
/// `(x, y) ↦ (−y, x)` and the sign change `x ↦ −x`, starting from the
/// primitive integral form proportional to `f`.
pub fn minimal_height_search(f: &QForm, budget: SearchBudget) -> Result<MinimalHeight> {
    let (prim, _) = f.primitive_part()?;
    let start: Option<Vec<i128>> = prim
        .coeffs()
        .iter()
        .map(|c| c.to_integer().to_i128())
        .collect();
    let identity = Matrix2::from_integers(1, 0, 0, 1);
    let Some(start) = start.map(canonical) else {
        // too large for the fast path: report f itself
        let max = prim.coeffs().iter().map(|c| c.to_integer().magnitude().clone()).max().unwrap();
        return Ok(MinimalHeight {
            log_height: crate::scalar::ln_abs_bigint(&BigInt::from(max.clone())),
            max_coefficient: max.into(),
            form: prim,
            certificate: identity,
            expanded: 0,
        });
    };

    let mut best = (height(&start), start.clone(), [1i128, 0, 0, 1]);
    let mut seen: HashSet<Vec<i128>> = HashSet::new();
    seen.insert(start.clone());
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((height(&start), 0usize, start, [1i128, 0, 0, 1])));
    let mut expanded = 0;
    while let Some(Reverse((h, depth, c, m))) = heap.pop() {
        if h < best.0 {
            best = (h, c.clone(), m);
        }
        if best.0 <= 1 || expanded >= budget.max_nodes {
            break;
        }
        if depth >= budget.max_depth || budget.max_entry.is_some_and(|b| h > b) {
            continue;
        }
        expanded += 1;
        for (g, gm) in GENERATORS.iter().enumerate() {
            let Some(next) = apply(&c, g) else { continue };
            let next = canonical(next);
            let Some(nm) = mat_mul(&m, gm) else { continue };
            if seen.insert(next.clone()) {
                heap.push(Reverse((height(&next), depth + 1, next, nm)));
            }
        }
    }
    let (h, c, m) = best;
    let r = |v: i128| BigRational::from_integer(BigInt::from(v));
    let form = QForm::new(c.iter().map(|&v| r(v)).collect())?;
    Ok(MinimalHeight {
        form,
        log_height: (h as f64).ln(),
        max_coefficient: BigInt::from(h),
        certificate: Matrix2::new(r(m[0]), r(m[1]), r(m[2]), r(m[3])),
        expanded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heights::naive_height;
    use proptest::prelude::*;

    fn q(c: &[i64]) -> QForm {
        QForm::from_integers(c).unwrap()
    }

    #[test]
    fn generators_match_their_matrices() {
        let f = q(&[3, -1, 4, 1, -5]);
        let c: Vec<i128> = vec![3, -1, 4, 1, -5];
        for (g, m) in GENERATORS.iter().enumerate() {
            let via_act = f
                .act(&Matrix2::from_integers(m[0] as i64, m[1] as i64, m[2] as i64, m[3] as i64))
                .unwrap();
            let fast: Vec<i64> = apply(&c, g).unwrap().iter().map(|&v| v as i64).collect();
            assert_eq!(via_act, q(&fast));
        }
    }

    #[test]
    fn already_minimal() {
        let r = minimal_height_search(&q(&[-1, 0, 0, 1]), SearchBudget::default()).unwrap();
        assert_eq!(r.log_height, 0.0);
        assert_eq!(r.certificate, Matrix2::from_integers(1, 0, 0, 1));
    }

    #[test]
    fn identity_when_nothing_improves() {
        let f = q(&[2, 0, 0, 3]);
        let r = minimal_height_search(&f, SearchBudget::default()).unwrap();
        assert!(r.log_height <= 3f64.ln() + 1e-15);
    }

    fn sl2_small() -> impl Strategy<Value = (i64, i64, i64, i64)> {
        (-3i64..=3, -3i64..=3, -3i64..=3, -3i64..=3).prop_filter("det 1", |(a, b, c, d)| a * d - b * c == 1)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn recovers_the_cube_form((a, b, c, d) in sl2_small()) {
            let f = q(&[-1, 0, 0, 1]).act(&Matrix2::from_integers(a, b, c, d)).unwrap();
            let budget = SearchBudget { max_depth: 8, ..SearchBudget::default() };
            let r = minimal_height_search(&f, budget).unwrap();
            prop_assert_eq!(r.log_height, 0.0);
            // certificate is honest
            let (g, _) = f.act(&r.certificate).unwrap().primitive_part().unwrap();
            let (h, _) = r.form.primitive_part().unwrap();
            prop_assert_eq!(g, h);
        }

        #[test]
        fn never_worse_than_the_input(c in prop::collection::vec(-9i64..=9, 4..=7)) {
            prop_assume!(c.iter().any(|&v| v != 0));
            let f = q(&c);
            let r = minimal_height_search(&f, SearchBudget::default()).unwrap();
            prop_assert!(r.log_height <= naive_height(&f).unwrap().value() + 1e-12);
            let small = minimal_height_search(&f, SearchBudget { max_depth: 3, max_nodes: 50, max_entry: None }).unwrap();
            prop_assert!(r.log_height <= small.log_height + 1e-12);
        }
    }
}
