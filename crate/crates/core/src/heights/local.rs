//! Local minimality of integral models at a finite prime.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{factorize, int_valuation};
use crate::error::{Error, Result};
use crate::forms::{discriminant, max_multiplicity_mod_p, reduction_semistable_at, Matrix2, QForm};
use crate::invariants::evaluate_invariants;

/// Primes above this bound are tested for semistable reduction but not
/// searched for better models.
pub const SEARCH_PRIME_LIMIT: u64 = 10_000;

const MAX_ROUNDS: usize = 64;

/// Outcome of the minimality test and model search at one prime.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReductionReport {
    #[serde(serialize_with = "crate::heights::report::ser_display")]
    pub prime: BigUint,
    /// Largest root multiplicity of the reduction, counting infinity.
    pub multiplicity_mod_p: usize,
    /// Semistable reduction certifies minimality at `p`.
    pub semistable_reduction: bool,
    #[serde(serialize_with = "crate::heights::report::ser_display")]
    pub measure_before: BigRational,
    #[serde(serialize_with = "crate::heights::report::ser_display")]
    pub measure_after: BigRational,
    /// Primitive model reached, `model ∝ f^transformation`.
    #[serde(serialize_with = "crate::heights::report::ser_coeffs")]
    pub model: QForm,
    #[serde(serialize_with = "crate::heights::report::ser_matrix")]
    pub transformation: Matrix2<BigRational>,
    pub steps: usize,
    /// `log max |aᵢ|` of the primitive input and of the model.
    pub naive_before: f64,
    pub naive_after: f64,
    /// False when `p` exceeds [`SEARCH_PRIME_LIMIT`] and no search ran.
    pub searched: bool,
}

impl ReductionReport {
    pub fn improved(&self) -> bool {
        self.measure_after < self.measure_before
    }

    /// The model search optimizes the invariant measure; the naive height
    /// of the model can go either way.
    pub fn height_lowered(&self) -> bool {
        self.naive_after < self.naive_before
    }
}

/// `min_j v_p(ξ_j(f)) / q_j` over nonzero invariants, or
/// `v_p(Δ(f)) / (2d − 2)` outside the degrees with an invariant basis.
pub fn minimality_measure(f: &QForm, p: &BigUint) -> Result<BigRational> {
    let d = f.degree();
    if (3..=6).contains(&d) {
        let xi = evaluate_invariants(f)?;
        xi.values
            .iter()
            .zip(xi.weights.as_slice())
            .filter(|(v, _)| !v.is_zero())
            .map(|(v, &q)| rational_valuation(v, p) / BigRational::from_integer(q.into()))
            .min()
            .ok_or(Error::Nullcone {
                degree: d,
                max_multiplicity: crate::forms::max_multiplicity(f)?,
                what: "minimality measure undefined",
            })
    } else {
        let disc = discriminant(f)?;
        if disc.is_zero() {
            return Err(Error::RepeatedRoots("minimality measure needs a nonzero discriminant"));
        }
        Ok(rational_valuation(&disc, p) / BigRational::from_integer(BigInt::from(2 * d - 2)))
    }
}

fn rational_valuation(q: &BigRational, p: &BigUint) -> BigRational {
    let v = int_valuation(q.numer().magnitude(), p) - int_valuation(q.denom().magnitude(), p);
    BigRational::from_integer(v.into())
}

/// Primes at which a primitive integral model can fail to be minimal: the
/// prime divisors of `Δ(f)`, or of the nonzero invariants when `Δ = 0`.
pub fn bad_primes(f: &QForm) -> Result<Vec<BigUint>> {
    let (g, _) = f.primitive_part()?;
    let disc = discriminant(&g)?;
    let mut out: Vec<BigUint> = Vec::new();
    let mut add = |n: &BigInt| -> Result<()> {
        for (p, _) in factorize(n)?.factors() {
            if !out.contains(p) {
                out.push(p.clone());
            }
        }
        Ok(())
    };
    if !disc.is_zero() {
        add(&disc.to_integer())?;
    } else if (3..=6).contains(&g.degree()) {
        for v in evaluate_invariants(&g)?.values.iter().filter(|v| !v.is_zero()) {
            add(v.numer())?;
        }
    } else {
        return Err(Error::RepeatedRoots("bad primes need a nonzero discriminant"));
    }
    out.sort();
    Ok(out)
}

/// Tests minimality of the primitive model of the integral form `f` at `p`
/// and searches the `p + 1` substitutions `f(px + βy, y)`, `0 ≤ β < p`, and
/// `f(x, py)`, one per index-`p` sublattice of ℤ², each followed by content
/// removal, keeping any that lowers the measure, until
/// none does.
pub fn reduce_at(f: &QForm, p: &BigUint) -> Result<ReductionReport> {
    if !f.is_integral() {
        return Err(Error::NotIntegral);
    }
    if !crate::arith::is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let (mut g, _) = f.primitive_part()?;
    let multiplicity_mod_p = max_multiplicity_mod_p(&g, p)?;
    let semistable_reduction = reduction_semistable_at(&g, p)?;
    let measure_before = minimality_measure(&g, p)?;
    let naive_before = log_max(&g);
    let mut measure = measure_before.clone();
    let mut transformation = Matrix2::identity();
    let mut steps = 0;
    let small = p.to_u64().filter(|&s| s <= SEARCH_PRIME_LIMIT);
    if let Some(ps) = small {
        let pr = BigRational::from_integer(BigInt::from(ps));
        let r = |v: u64| BigRational::from_integer(BigInt::from(v));
        let zero = BigRational::zero();
        let one = r(1);
        'rounds: for _ in 0..MAX_ROUNDS {
            let candidates = (0..ps)
                .map(|b| Matrix2::new(pr.clone(), r(b), zero.clone(), one.clone()))
                .chain(std::iter::once(Matrix2::new(one.clone(), zero.clone(), zero.clone(), pr.clone())));
            for m in candidates {
                let (h, _) = g.act(&m)?.primitive_part()?;
                let mu = minimality_measure(&h, p)?;
                if mu < measure {
                    g = h;
                    measure = mu;
                    transformation = transformation.mul(&m);
                    steps += 1;
                    continue 'rounds;
                }
            }
            break;
        }
    }
    Ok(ReductionReport {
        prime: p.clone(),
        multiplicity_mod_p,
        semistable_reduction,
        measure_before,
        measure_after: measure,
        transformation,
        steps,
        naive_before,
        naive_after: log_max(&g),
        model: g,
        searched: small.is_some(),
    })
}

fn log_max(g: &QForm) -> f64 {
    g.coeffs()
        .iter()
        .filter(|c| !c.is_zero())
        .map(crate::scalar::ln_abs_rational)
        .fold(f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn q(c: &[i64]) -> QForm {
        QForm::from_integers(c).unwrap()
    }

    fn p(n: u32) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn cube_form_at_three() {
        let f = q(&[-1, 0, 0, 1]);
        let r = reduce_at(&f, &p(3)).unwrap();
        assert!(!r.semistable_reduction);
        assert_eq!(r.multiplicity_mod_p, 3);
        // f(3x + y, y) = 9·x(3x² + 3xy + y²), discriminant -3
        assert!(r.improved());
        assert_eq!(r.measure_before, rat(3, 4));
        assert_eq!(r.measure_after, rat(1, 4));
        assert_eq!(discriminant(&r.model).unwrap(), rat(-3, 1));
        assert!(!r.height_lowered());
        let (back, _) = f.act(&r.transformation).unwrap().primitive_part().unwrap();
        assert_eq!(back, r.model);
    }

    #[test]
    fn cube_form_at_five() {
        let r = reduce_at(&q(&[-1, 0, 0, 1]), &p(5)).unwrap();
        assert!(r.semistable_reduction);
        assert_eq!(r.measure_before, rat(0, 1));
    }

    #[test]
    fn inflated_model_is_recovered() {
        // f(x, 3y) and f(x + y, 9y) for f = x^3 - y^3
        for m in [Matrix2::from_integers(1, 0, 0, 3), Matrix2::from_integers(1, 1, 0, 9)] {
            let f = q(&[-1, 0, 0, 1]).act(&m).unwrap();
            let r = reduce_at(&f, &p(3)).unwrap();
            assert!(r.improved(), "{m:?} {r:?}");
            assert!(r.measure_after <= rat(3, 4));
            assert!(r.height_lowered());
            let (back, _) = f.act(&r.transformation).unwrap().primitive_part().unwrap();
            assert_eq!(back, r.model);
        }
    }

    #[test]
    fn measure_fallback_uses_discriminant() {
        // x^2 - 12y^2: disc = 48 = 2^4·3, weight 2
        let m = minimality_measure(&q(&[-12, 0, 1]), &p(2)).unwrap();
        assert_eq!(m, rat(2, 1));
    }

    #[test]
    fn bad_primes_of_cube_form() {
        assert_eq!(bad_primes(&q(&[-1, 0, 0, 1])).unwrap(), vec![p(3)]);
        assert_eq!(bad_primes(&q(&[-2, 0, 0, 1])).unwrap(), vec![p(2), p(3)]);
    }

    #[test]
    fn rejects_bad_input() {
        let half = QForm::new(vec![rat(1, 2), rat(0, 1), rat(0, 1), rat(1, 1)]).unwrap();
        assert_eq!(reduce_at(&half, &p(3)).unwrap_err(), Error::NotIntegral);
        assert!(matches!(reduce_at(&q(&[-1, 0, 0, 1]), &p(4)), Err(Error::NotPrime(_))));
    }
}
