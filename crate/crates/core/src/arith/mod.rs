//! Exact integer and rational arithmetic underpinning the non-archimedean
//! side of every height: factorizations, `p`-adic valuations, places, and
//! formal logarithms.

mod factor;
mod logvalue;

pub use factor::{factorize, factorize_rational, is_prime, Factorization};
pub use logvalue::LogValue;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A place of the rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Finite(BigUint),
    Archimedean,
}

impl Place {
    pub fn finite(p: impl Into<BigUint>) -> Result<Self> {
        let p = p.into();
        if !is_prime(&p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        Ok(Place::Finite(p))
    }
}

/// `v_p` of a rational. Zero has infinite valuation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

pub fn valuation(q: &BigRational, p: &BigUint) -> Valuation {
    if q.is_zero() {
        return Valuation::Infinite;
    }
    Valuation::Finite(int_valuation(q.numer().magnitude(), p) - int_valuation(q.denom().magnitude(), p))
}

/// `v_p(n)` for a nonzero natural number.
pub fn int_valuation(n: &BigUint, p: &BigUint) -> i64 {
    debug_assert!(!n.is_zero());
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        m = q;
    }
}

/// `log |q|_place` as a formal combination of prime logarithms.
///
/// At the archimedean place `log |q|` is written through the factorization
/// of `q`, so that sums over all places cancel symbolically.
pub fn log_abs(q: &BigRational, place: &Place) -> Result<LogValue> {
    if q.is_zero() {
        return Err(Error::Zero("log of |0|"));
    }
    Ok(match place {
        Place::Finite(p) => {
            let v = match valuation(q, p) {
                Valuation::Finite(v) => v,
                Valuation::Infinite => unreachable!(),
            };
            LogValue::prime(p.clone(), BigRational::from_integer(BigInt::from(-v)))
        }
        Place::Archimedean => {
            let f = factorize_rational(q)?;
            let mut out = LogValue::zero();
            for (p, e) in f.factors() {
                out.add_term(p.clone(), BigRational::from_integer(BigInt::from(*e)));
            }
            out
        }
    })
}

/// `Σ_ν log |q|_ν` over every place of ℚ, kept symbolic.
pub fn product_formula_defect(q: &BigRational) -> Result<LogValue> {
    let mut total = log_abs(q, &Place::Archimedean)?;
    let f = factorize_rational(q)?;
    for (p, _) in f.factors() {
        total = total + log_abs(q, &Place::Finite(p.clone()))?;
    }
    Ok(total)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn is_integral(q: &BigRational) -> bool {
    q.denom().is_one()
}

/// Rational `q^e` for a signed exponent.
pub fn pow_rational(q: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow(q.clone(), e as usize)
    } else {
        num_traits::pow(q.recip(), (-e) as usize)
    }
}

pub fn gcd_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values.into_iter().fold(BigInt::zero(), |acc, v| acc.gcd(v))
}

pub fn lcm_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, v| acc.lcm(v))
}

pub fn abs_rational(q: &BigRational) -> BigRational {
    q.abs()
}

pub fn sign_of(q: &BigRational) -> Sign {
    q.numer().sign()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&int(12), &big(2)), Valuation::Finite(2));
        assert_eq!(valuation(&rat(1, 9), &big(3)), Valuation::Finite(-2));
        assert_eq!(valuation(&int(7), &big(5)), Valuation::Finite(0));
        assert_eq!(valuation(&int(0), &big(5)), Valuation::Infinite);
    }

    #[test]
    fn log_abs_examples() {
        let l = log_abs(&int(8), &Place::finite(2u32).unwrap()).unwrap();
        assert_eq!(l, LogValue::prime(big(2), int(-3)));
        assert!((l.to_f64() + 3.0 * 2f64.ln()).abs() < 1e-15);
        assert!(log_abs(&int(1), &Place::Archimedean).unwrap().is_zero());
        assert!(log_abs(&int(1), &Place::finite(7u32).unwrap()).unwrap().is_zero());
        let a = log_abs(&rat(3, 2), &Place::Archimedean).unwrap();
        assert!((a.to_f64() - 0.405465108108164).abs() < 1e-12);
        assert!(log_abs(&int(0), &Place::Archimedean).is_err());
    }

    #[test]
    fn finite_place_requires_prime() {
        assert!(Place::finite(6u32).is_err());
        assert!(Place::finite(1u32).is_err());
    }

    #[test]
    fn product_formula_examples() {
        for q in [int(6), rat(-35, 12), int(1)] {
            assert!(product_formula_defect(&q).unwrap().is_zero());
        }
    }

    proptest! {
        #[test]
        fn valuation_is_additive(a in 1i64..1_000_000, b in 1i64..1_000_000, c in 1i64..1000, d in 1i64..1000, p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 101])) {
            let x = rat(a, c);
            let y = rat(-b, d);
            let p = big(p);
            let lhs = valuation(&(&x * &y), &p).finite().unwrap();
            prop_assert_eq!(lhs, valuation(&x, &p).finite().unwrap() + valuation(&y, &p).finite().unwrap());
        }

        #[test]
        fn product_formula_is_exact(n in -10_000_000i64..10_000_000, d in 1i64..10_000_000) {
            prop_assume!(n != 0);
            prop_assert!(product_formula_defect(&rat(n, d)).unwrap().is_zero());
        }
    }
}
