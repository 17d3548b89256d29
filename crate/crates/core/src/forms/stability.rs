//! Exact root multiplicities and GIT (semi)stability of binary forms.

use num_traits::Zero;

use super::upoly::{degree, squarefree_decomposition};
use super::QForm;
use crate::error::{Error, Result};

/// Root multiplicities of a form, computed over ℚ without any root finding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multiplicities {
    /// One entry per distinct finite root.
    pub finite: Vec<usize>,
    /// Multiplicity of `[1 : 0]`, zero if it is not a root.
    pub infinity: usize,
}

impl Multiplicities {
    pub fn max(&self) -> usize {
        self.finite.iter().copied().max().unwrap_or(0).max(self.infinity)
    }

    pub fn total(&self) -> usize {
        self.finite.iter().sum::<usize>() + self.infinity
    }
}

pub fn multiplicities(f: &QForm) -> Result<Multiplicities> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    let top = f.coeffs().iter().rposition(|c| !c.is_zero()).unwrap();
    let mut finite = Vec::new();
    for (g, m) in squarefree_decomposition(&f.coeffs()[..=top]) {
        finite.extend(std::iter::repeat_n(m, degree(&g).unwrap_or(0)));
    }
    Ok(Multiplicities {
        finite,
        infinity: f.degree() - top,
    })
}

pub fn max_multiplicity(f: &QForm) -> Result<usize> {
    Ok(multiplicities(f)?.max())
}

/// No root of multiplicity greater than `d/2`.
pub fn is_semistable(f: &QForm) -> Result<bool> {
    Ok(2 * max_multiplicity(f)? <= f.degree())
}

/// No root of multiplicity `d/2` or more.
pub fn is_stable(f: &QForm) -> Result<bool> {
    Ok(2 * max_multiplicity(f)? < f.degree())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::Matrix2;
    use proptest::prelude::*;

    fn q(c: &[i64]) -> QForm {
        QForm::from_integers(c).unwrap()
    }

    #[test]
    fn examples() {
        let cube = q(&[-1, 0, 0, 1]);
        assert_eq!(max_multiplicity(&cube).unwrap(), 1);
        assert!(is_stable(&cube).unwrap());
        let x2y = q(&[0, 0, 1, 0]);
        assert_eq!(max_multiplicity(&x2y).unwrap(), 2);
        assert!(!is_semistable(&x2y).unwrap());
        let x2y2 = q(&[0, 0, 1, 0, 0]);
        assert!(is_semistable(&x2y2).unwrap());
        assert!(!is_stable(&x2y2).unwrap());
        // irreducible quadratic factor counts twice
        let f = q(&[1, 0, 1]).mul(&q(&[1, 0, 1]));
        assert_eq!(multiplicities(&f).unwrap().finite, vec![2, 2]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn invariant_under_gl2(
            coeffs in (1usize..=6).prop_flat_map(|d| prop::collection::vec(-4i64..=4, d + 1)),
            m in (-3i64..=3, -3i64..=3, -3i64..=3, -3i64..=3),
        ) {
            prop_assume!(coeffs.iter().any(|&c| c != 0));
            let (a, b, c, d) = m;
            prop_assume!(a * d - b * c != 0);
            let f = q(&coeffs);
            let g = f.act(&Matrix2::from_integers(a, b, c, d)).unwrap();
            let (mf, mg) = (multiplicities(&f).unwrap(), multiplicities(&g).unwrap());
            prop_assert_eq!(mf.total(), f.degree());
            let sorted = |m: &Multiplicities| {
                let mut v = m.finite.clone();
                if m.infinity > 0 { v.push(m.infinity); }
                v.sort();
                v
            };
            prop_assert_eq!(sorted(&mf), sorted(&mg));
        }
    }
}
