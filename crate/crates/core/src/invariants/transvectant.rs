use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::forms::BinaryForm;
use crate::scalar::{QAlgebra, Ring};

fn falling(n: usize, k: usize) -> i64 {
    (0..k).map(|t| (n - t) as i64).product()
}

fn factorial(n: usize) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, t| acc * (n - t) as i64 / (t + 1) as i64)
}

/// `∂^{i+j} f / ∂xⁱ ∂yʲ`, of formal degree `d − i − j`.
fn partial<T: Ring>(f: &BinaryForm<T>, i: usize, j: usize) -> BinaryForm<T> {
    let d = f.degree();
    let out = d - i - j;
    BinaryForm::covariant(
        (0..=out)
            .map(|e| {
                let src = e + i;
                let factor = falling(src, i) * falling(d - src, j);
                f.coeff(src).clone() * T::from_i64(factor)
            })
            .collect(),
    )
}

/// The `k`-th transvectant
/// `(f, g)_k = ((m−k)!(n−k)!/(m!n!)) Σⱼ (−1)ʲ C(k,j) ∂ᵏf/∂x^{k−j}∂yʲ · ∂ᵏg/∂xʲ∂y^{k−j}`,
/// a covariant of degree `m + n − 2k`.
pub fn transvectant<T: QAlgebra>(f: &BinaryForm<T>, g: &BinaryForm<T>, k: usize) -> Result<BinaryForm<T>> {
    let (m, n) = (f.degree(), g.degree());
    if k > m.min(n) {
        return Err(Error::TransvectantOrder { k, m, n });
    }
    let mut sum = BinaryForm::<T>::zero(m + n - 2 * k);
    for j in 0..=k {
        let mut c = binomial(k, j);
        if j % 2 == 1 {
            c = -c;
        }
        let term = partial(f, k - j, j).mul(&partial(g, j, k - j));
        sum = sum.add(&term.scale(&T::from_i64(c)));
    }
    let norm = BigRational::new(
        factorial(m - k) * factorial(n - k),
        factorial(m) * factorial(n),
    );
    Ok(sum.map(|c| c.mul_rational(&norm)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::forms::QForm;
    use proptest::prelude::*;

    fn q(c: &[i64]) -> QForm {
        QForm::from_integers(c).unwrap()
    }

    #[test]
    fn zeroth_is_product() {
        let (f, g) = (q(&[1, 2, 3]), q(&[-1, 0, 4, 1]));
        assert_eq!(transvectant(&f, &g, 0).unwrap(), f.mul(&g));
    }

    #[test]
    fn quadratic_second_transvectant() {
        // a x^2 + b x y + c y^2 -> 2ac - b^2/2 = -(b^2 - 4ac)/2
        for (a, b, c) in [(1, 0, 1), (3, 5, 7), (-2, 1, 4)] {
            let f = q(&[c, b, a]);
            let t = transvectant(&f, &f, 2).unwrap();
            assert_eq!(t.degree(), 0);
            assert_eq!(t.coeff(0), &(int(2 * a * c) - rat(b * b, 2)));
        }
    }

    #[test]
    fn order_out_of_range() {
        let f = q(&[1, 2, 3]);
        assert_eq!(
            transvectant(&f, &f, 3),
            Err(Error::TransvectantOrder { k: 3, m: 2, n: 2 })
        );
    }

    proptest! {
        #[test]
        fn odd_self_transvectants_vanish(
            c in (2usize..=6).prop_flat_map(|d| prop::collection::vec(-9i64..=9, d + 1)),
            k in 0usize..=6,
        ) {
            prop_assume!(c.iter().any(|&v| v != 0));
            let f = q(&c);
            prop_assume!(k % 2 == 1 && k <= f.degree());
            prop_assert!(transvectant(&f, &f, k).unwrap().is_zero());
        }
    }
}
