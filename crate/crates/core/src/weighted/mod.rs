//! Points of weighted projective space over ℚ and their heights.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{factorize, gcd_all, lcm_all, valuation, LogValue, Place, Valuation};
use crate::error::{Error, Result};
use crate::scalar::ln_abs_rational;

/// Positive integer weights `(q₀, …, qₙ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Weights(Vec<u32>);

impl Weights {
    pub fn new(q: Vec<u32>) -> Result<Self> {
        if q.is_empty() || q.contains(&0) {
            return Err(Error::Invalid(format!("weights must be positive and nonempty: {q:?}")));
        }
        Ok(Weights(q))
    }

    pub fn ones(n: usize) -> Self {
        Weights(vec![1; n])
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `lcm(qᵢ)`.
    pub fn m(&self) -> u64 {
        self.0.iter().fold(1u64, |acc, &q| acc.lcm(&(q as u64)))
    }

    /// `gcd(qᵢ)`.
    pub fn delta(&self) -> u64 {
        self.0.iter().fold(0u64, |acc, &q| acc.gcd(&(q as u64)))
    }

    pub fn max(&self) -> u32 {
        *self.0.iter().max().unwrap()
    }

    /// Every `n` of the `n + 1` weights are coprime.
    pub fn is_well_formed(&self) -> bool {
        if self.0.len() == 1 {
            return self.0[0] == 1;
        }
        (0..self.0.len()).all(|skip| {
            self.0
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .fold(0u64, |acc, (_, &q)| acc.gcd(&(q as u64)))
                == 1
        })
    }
}

impl fmt::Display for Weights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

/// A height split into its exact non-archimedean part and a float
/// archimedean part.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplitHeight {
    pub finite: LogValue,
    pub archimedean: f64,
}

impl SplitHeight {
    pub fn value(&self) -> f64 {
        self.finite.to_f64() + self.archimedean
    }
}

/// A nonzero point of weighted projective space.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedPoint {
    coords: Vec<BigRational>,
    weights: Weights,
}

fn pow(q: &BigRational, e: u64) -> BigRational {
    num_traits::pow(q.clone(), e as usize)
}

impl WeightedPoint {
    pub fn new(coords: Vec<BigRational>, weights: Weights) -> Result<Self> {
        if coords.len() != weights.len() {
            return Err(Error::Invalid(format!(
                "{} coordinates for {} weights",
                coords.len(),
                weights.len()
            )));
        }
        if coords.iter().all(Zero::is_zero) {
            return Err(Error::Zero("weighted projective point"));
        }
        Ok(WeightedPoint { coords, weights })
    }

    pub fn from_integers(coords: &[i64], weights: &[u32]) -> Result<Self> {
        Self::new(
            coords.iter().map(|&c| BigRational::from_integer(c.into())).collect(),
            Weights::new(weights.to_vec())?,
        )
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    fn nonzero(&self) -> impl Iterator<Item = (&BigRational, u32)> {
        self.coords
            .iter()
            .zip(self.weights.as_slice().iter().copied())
            .filter(|(c, _)| !c.is_zero())
    }

    /// `λ ⋆ x = (λ^{q₀}x₀, …, λ^{qₙ}xₙ)`.
    pub fn scale(&self, lambda: &BigRational) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::Zero("scaling factor"));
        }
        Ok(WeightedPoint {
            coords: self
                .coords
                .iter()
                .zip(self.weights.as_slice())
                .map(|(c, &q)| c * pow(lambda, q as u64))
                .collect(),
            weights: self.weights.clone(),
        })
    }

    /// Canonical integral representative: denominators cleared, the
    /// weighted gcd divided out, and the first nonzero odd-weight
    /// coordinate made positive.
    pub fn normalize(&self) -> Self {
        let dens: Vec<BigInt> = self.coords.iter().map(|c| c.denom().clone()).collect();
        let l = BigRational::from_integer(lcm_all(&dens));
        let mut p = self.scale(&l).expect("nonzero lcm");
        let nums: Vec<BigInt> = p.nonzero().map(|(c, _)| c.to_integer()).collect();
        let g = gcd_all(&nums);
        if !g.is_one() {
            let mut lambda = BigInt::one();
            for (prime, _) in factorize(&g).expect("nonzero gcd").factors() {
                let e = p
                    .nonzero()
                    .map(|(c, q)| match valuation(c, prime) {
                        Valuation::Finite(v) => Integer::div_floor(&v, &(q as i64)),
                        Valuation::Infinite => i64::MAX,
                    })
                    .min()
                    .unwrap();
                lambda *= num_traits::pow(BigInt::from(prime.clone()), e as usize);
            }
            if !lambda.is_one() {
                p = p
                    .scale(&BigRational::new(BigInt::one(), lambda))
                    .expect("nonzero");
            }
        }
        let flip = p
            .nonzero()
            .find(|(_, q)| q % 2 == 1)
            .is_some_and(|(c, _)| c.is_negative());
        if flip {
            p = p.scale(&-BigRational::one()).expect("nonzero");
        }
        p
    }

    /// Equality in weighted projective space.
    pub fn equivalent(&self, other: &Self) -> bool {
        self.weights == other.weights && self.normalize() == other.normalize()
    }

    /// `(x₀^{m/q₀} : ⋯ : xₙ^{m/qₙ})` in ordinary projective space.
    pub fn veronese(&self) -> Vec<BigRational> {
        let m = self.weights.m();
        self.coords
            .iter()
            .zip(self.weights.as_slice())
            .map(|(c, &q)| pow(c, m / q as u64))
            .collect()
    }

    /// Primes at which some local maximum differs from 1.
    fn relevant_primes(&self) -> Vec<BigUint> {
        let nums: Vec<BigInt> = self.nonzero().map(|(c, _)| c.numer().clone()).collect();
        let dens: Vec<BigInt> = self.nonzero().map(|(c, _)| c.denom().clone()).collect();
        let mut primes: Vec<BigUint> = Vec::new();
        for n in [gcd_all(&nums), lcm_all(&dens)] {
            for (p, _) in factorize(&n).expect("nonzero").factors() {
                primes.push(p.clone());
            }
        }
        primes.sort();
        primes.dedup();
        primes
    }

    /// `log max_j |x_j|_p^{1/q_j}` as a multiple of `log p`.
    fn local_log_max_finite(&self, p: &BigUint) -> BigRational {
        self.nonzero()
            .map(|(c, q)| {
                let v = valuation(c, p).finite().expect("nonzero");
                BigRational::new((-v).into(), (q as i64).into())
            })
            .max()
            .unwrap()
    }

    /// `log max_j |x_j|^{1/q_j}` at the real place.
    pub fn archimedean_log_max(&self) -> f64 {
        self.nonzero()
            .map(|(c, q)| ln_abs_rational(c) / q as f64)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// The logarithmic weighted height `Σ_ν log max_j |x_j|_ν^{1/q_j}`.
    pub fn lwh(&self) -> SplitHeight {
        let mut finite = LogValue::zero();
        for p in self.relevant_primes() {
            let c = self.local_log_max_finite(&p);
            finite.add_term(p, c);
        }
        SplitHeight {
            finite,
            archimedean: self.archimedean_log_max(),
        }
    }
}

impl fmt::Display for WeightedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}] weights {}", s.join(" : "), self.weights)
    }
}

/// Weil height of a point of ordinary projective space.
pub fn standard_height(coords: &[BigRational]) -> Result<SplitHeight> {
    Ok(WeightedPoint::new(coords.to_vec(), Weights::ones(coords.len()))?.lwh())
}

/// `−(1/m)·log(|ℓ(x)|_ν / max_i |x_i|_ν^{1/q_i})`; with unit weights this is
/// the usual local Weil height of the hyperplane `ℓ = 0`.
pub fn local_hyperplane_height(x: &WeightedPoint, ell: &[BigRational], place: &Place) -> Result<f64> {
    let value = linear_value(x, ell)?;
    let m = x.weights.m() as f64;
    let (log_l, log_max) = match place {
        Place::Archimedean => (ln_abs_rational(&value), x.archimedean_log_max()),
        Place::Finite(p) => {
            let lp = crate::arith::log_abs(&value, place)?.to_f64();
            let mx = crate::scalar::rational_to_f64(&x.local_log_max_finite(p))
                * ln_abs_rational(&BigRational::from_integer(BigInt::from(p.clone())));
            (lp, mx)
        }
    };
    Ok(-(log_l - log_max) / m)
}

/// Sum of the local heights over every place where a term is nonzero.
pub fn global_hyperplane_height(x: &WeightedPoint, ell: &[BigRational]) -> Result<f64> {
    let value = linear_value(x, ell)?;
    let mut primes = x.relevant_primes();
    for n in [value.numer(), value.denom()] {
        for (p, _) in factorize(n).expect("nonzero").factors() {
            primes.push(p.clone());
        }
    }
    primes.sort();
    primes.dedup();
    let mut total = local_hyperplane_height(x, ell, &Place::Archimedean)?;
    for p in primes {
        total += local_hyperplane_height(x, ell, &Place::Finite(p))?;
    }
    Ok(total)
}

fn linear_value(x: &WeightedPoint, ell: &[BigRational]) -> Result<BigRational> {
    if ell.len() != x.coords.len() {
        return Err(Error::Invalid("linear form length differs from point".into()));
    }
    let v: BigRational = ell.iter().zip(&x.coords).map(|(a, b)| a * b).sum();
    if v.is_zero() {
        return Err(Error::OnDivisor);
    }
    Ok(v)
}

/// Faltings height of ℙᴺ with the Fubini–Study metric,
/// `½ Σ_{i=1}^{N} Σ_{j=1}^{i} 1/j`.
pub fn faltings_height_pn(n: u64) -> BigRational {
    let mut total = BigRational::zero();
    let mut harmonic = BigRational::zero();
    for i in 1..=n {
        harmonic += BigRational::new(BigInt::one(), BigInt::from(i));
        total += &harmonic;
    }
    total / BigRational::from_integer(2.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use proptest::prelude::*;

    fn wp(c: &[i64], w: &[u32]) -> WeightedPoint {
        WeightedPoint::from_integers(c, w).unwrap()
    }

    #[test]
    fn scale_examples() {
        let x = wp(&[1, 1], &[1, 2]);
        assert_eq!(x.scale(&int(1)).unwrap(), x);
        assert_eq!(x.scale(&int(2)).unwrap(), wp(&[2, 4], &[1, 2]));
        assert!(x.scale(&int(0)).is_err());
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(wp(&[2, 4], &[1, 2]).normalize(), wp(&[1, 1], &[1, 2]));
        assert_eq!(wp(&[4, 16], &[2, 4]).normalize(), wp(&[1, 1], &[2, 4]));
        let n = wp(&[3, -5, 7], &[1, 2, 3]).normalize();
        assert_eq!(n.normalize(), n);
        // sign: first odd-weight coordinate made positive
        assert_eq!(wp(&[-1, 2], &[1, 2]).normalize(), wp(&[1, 2], &[1, 2]));
        assert_eq!(wp(&[-3, 2], &[2, 4]).normalize(), wp(&[-3, 2], &[2, 4]));
        let q = WeightedPoint::new(vec![rat(1, 2), rat(1, 4)], Weights::new(vec![1, 2]).unwrap()).unwrap();
        assert_eq!(q.normalize(), wp(&[1, 1], &[1, 2]));
    }

    #[test]
    fn veronese_examples() {
        assert_eq!(wp(&[3, -4], &[1, 1]).veronese(), vec![int(3), int(-4)]);
        assert_eq!(wp(&[2, 3], &[1, 2]).veronese(), vec![int(4), int(3)]);
    }

    #[test]
    fn lwh_examples() {
        let h = wp(&[1, 1, 1], &[2, 4, 6]).lwh();
        assert!(h.finite.is_zero() && h.archimedean == 0.0);
        for c in [5i64, -12, 7] {
            assert!(wp(&[c], &[3]).lwh().value().abs() < 1e-15);
        }
        let h = wp(&[2, 3], &[2, 3]).lwh();
        assert!(h.finite.is_zero());
        assert!((h.value() - 3f64.ln() / 3.0).abs() < 1e-15);
        assert!((h.value() - 0.36620).abs() < 1e-5);
    }

    #[test]
    fn standard_height_examples() {
        assert_eq!(standard_height(&[int(1), int(1)]).unwrap().value(), 0.0);
        assert!((standard_height(&[int(2), int(3)]).unwrap().value() - 3f64.ln()).abs() < 1e-15);
        assert!((standard_height(&[rat(1, 2), int(3)]).unwrap().value() - 6f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn hyperplane_heights() {
        let x = wp(&[6, -35, 12], &[1, 1, 1]);
        let h = standard_height(x.coords()).unwrap().value();
        for ell in [[1i64, 0, 0], [1, 1, 1], [2, 0, -7]] {
            let ell: Vec<_> = ell.iter().map(|&v| int(v)).collect();
            assert!((global_hyperplane_height(&x, &ell).unwrap() - h).abs() < 1e-9);
        }
        let y = wp(&[4, 27, 10], &[2, 3, 5]);
        let target = y.lwh().value() / 30.0;
        for ell in [[1i64, 0, 0], [1, 1, 1], [3, -1, 5]] {
            let ell: Vec<_> = ell.iter().map(|&v| int(v)).collect();
            assert!((global_hyperplane_height(&y, &ell).unwrap() - target).abs() < 1e-9);
        }
        assert_eq!(
            local_hyperplane_height(&wp(&[1, -1], &[1, 1]), &[int(1), int(1)], &Place::Archimedean),
            Err(Error::OnDivisor)
        );
    }

    #[test]
    fn faltings_examples() {
        assert_eq!(faltings_height_pn(0), int(0));
        assert_eq!(faltings_height_pn(1), rat(1, 2));
        assert_eq!(faltings_height_pn(2), rat(5, 4));
    }

    #[test]
    fn well_formedness() {
        assert!(Weights::new(vec![1, 2, 3]).unwrap().is_well_formed());
        assert!(!Weights::new(vec![2, 4, 6, 10]).unwrap().is_well_formed());
        assert!(!Weights::new(vec![1, 2, 2]).unwrap().is_well_formed());
        let w = Weights::new(vec![2, 4, 6, 10]).unwrap();
        assert_eq!((w.m(), w.delta()), (60, 2));
    }

    fn point() -> impl Strategy<Value = WeightedPoint> {
        (1usize..=4)
            .prop_flat_map(|n| {
                (
                    prop::collection::vec((-30i64..=30, 1i64..=12), n),
                    prop::collection::vec(1u32..=6, n),
                )
            })
            .prop_filter("nonzero", |(c, _)| c.iter().any(|&(a, _)| a != 0))
            .prop_map(|(c, w)| {
                WeightedPoint::new(
                    c.into_iter().map(|(a, b)| rat(a, b)).collect(),
                    Weights::new(w).unwrap(),
                )
                .unwrap()
            })
    }

    fn lambda() -> impl Strategy<Value = BigRational> {
        (-20i64..=20, 1i64..=20)
            .prop_filter("nonzero", |(a, _)| *a != 0)
            .prop_map(|(a, b)| rat(a, b))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]
        #[test]
        fn lwh_is_scaling_invariant(x in point(), l in lambda()) {
            let (a, b) = (x.lwh(), x.scale(&l).unwrap().lwh());
            prop_assert!((a.value() - b.value()).abs() <= 1e-12 * (1.0 + a.value().abs()));
            prop_assert!(a.value() >= -1e-12);
        }

        #[test]
        fn veronese_law(x in point()) {
            let m = x.weights().m() as f64;
            let h = standard_height(&x.veronese()).unwrap().value();
            prop_assert!((h - m * x.lwh().value()).abs() <= 1e-9 * (1.0 + h.abs()));
        }

        #[test]
        fn veronese_commutes_with_scaling(x in point(), l in lambda()) {
            let v = x.veronese();
            let w = x.scale(&l).unwrap().veronese();
            let lm = num_traits::pow(l, x.weights().m() as usize);
            prop_assert!(v.iter().zip(&w).all(|(a, b)| a * &lm == *b));
        }

        #[test]
        fn scale_composes(x in point(), l in lambda(), mu in lambda()) {
            prop_assert_eq!(
                x.scale(&mu).unwrap().scale(&l).unwrap(),
                x.scale(&(l * mu)).unwrap()
            );
        }

        #[test]
        fn normalize_is_canonical(x in point(), l in lambda()) {
            let n = x.normalize();
            prop_assert_eq!(n.normalize(), n.clone());
            prop_assert_eq!(x.scale(&l).unwrap().normalize(), n);
        }
    }
}
