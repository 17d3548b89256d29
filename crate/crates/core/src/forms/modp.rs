//! Reduction of integral forms modulo a prime and root multiplicities over
//! the algebraic closure of 𝔽_p.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::QForm;
use crate::arith::is_prime;
use crate::error::{Error, Result};

type Poly = Vec<u64>;

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

fn trim(mut f: Poly) -> Poly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn deriv(f: &[u64], p: u64) -> Poly {
    trim(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mulmod(c, i as u64 % p, p))
            .collect(),
    )
}

fn div_rem(a: &[u64], b: &[u64], p: u64) -> (Poly, Poly) {
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let li = inv(b[db], p);
    let mut r = trim(a.to_vec());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0; r.len() - db];
    while r.len() > db {
        let dr = r.len() - 1;
        let c = mulmod(r[dr], li, p);
        let s = dr - db;
        for (i, &bc) in b.iter().enumerate() {
            r[s + i] = (r[s + i] + p - mulmod(c, bc, p)) % p;
        }
        q[s] = c;
        r = trim(r);
    }
    (trim(q), r)
}

fn monic(f: Poly, p: u64) -> Poly {
    match f.last() {
        Some(&l) => {
            let li = inv(l, p);
            f.into_iter().map(|c| mulmod(c, li, p)).collect()
        }
        None => f,
    }
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = div_rem(&a, &b, p).1;
        a = b;
        b = r;
    }
    monic(a, p)
}

/// Squarefree factorization over 𝔽_p: `(gᵢ, mᵢ)` with the `gᵢ` pairwise
/// coprime and squarefree. Handles `f' = 0` by taking p-th roots.
fn squarefree(f: &[u64], p: u64) -> Vec<(Poly, usize)> {
    let f = monic(trim(f.to_vec()), p);
    let mut out = Vec::new();
    if f.len() <= 1 {
        return out;
    }
    let mut c = gcd(&f, &deriv(&f, p), p);
    let mut w = div_rem(&f, &c, p).0;
    let mut i = 1;
    while w.len() > 1 {
        let y = gcd(&w, &c, p);
        let fac = div_rem(&w, &y, p).0;
        if fac.len() > 1 {
            out.push((fac, i));
        }
        w = y;
        c = div_rem(&c, &w, p).0;
        i += 1;
    }
    if c.len() > 1 {
        // c is a p-th power: only exponents divisible by p survive
        let root: Poly = c.iter().step_by(p as usize).copied().collect();
        for (g, m) in squarefree(&root, p) {
            out.push((g, m * p as usize));
        }
    }
    out
}

fn reduce(f: &QForm, p: &BigUint) -> Result<(Vec<u64>, u64)> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let pu = p
        .to_u64()
        .ok_or_else(|| Error::Invalid(format!("prime {p} exceeds 64 bits")))?;
    let ints = f.integer_coeffs().ok_or(Error::NotIntegral)?;
    let pb = BigInt::from(pu);
    let red: Vec<u64> = ints
        .iter()
        .map(|c| c.mod_floor(&pb).to_u64().unwrap())
        .collect();
    if red.iter().all(|&c| c == 0) {
        return Err(Error::VanishesModP(pu));
    }
    Ok((red, pu))
}

/// Largest root multiplicity of `f mod p` over the algebraic closure,
/// counting the root at infinity created by a degree drop.
pub fn max_multiplicity_mod_p(f: &QForm, p: &BigUint) -> Result<usize> {
    let (red, pu) = reduce(f, p)?;
    let d = f.degree();
    let top = red.iter().rposition(|&c| c != 0).unwrap();
    let finite = squarefree(&red[..=top], pu)
        .into_iter()
        .map(|(_, m)| m)
        .max()
        .unwrap_or(0);
    Ok(finite.max(d - top))
}

/// Whether the reduction of the integral form `f` modulo `p` is semistable.
pub fn reduction_semistable_at(f: &QForm, p: &BigUint) -> Result<bool> {
    Ok(2 * max_multiplicity_mod_p(f, p)? <= f.degree())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::max_multiplicity;
    use proptest::prelude::*;

    fn q(c: &[i64]) -> QForm {
        QForm::from_integers(c).unwrap()
    }

    fn big(p: u64) -> BigUint {
        BigUint::from(p)
    }

    #[test]
    fn examples() {
        let cube = q(&[-1, 0, 0, 1]);
        assert!(reduction_semistable_at(&cube, &big(5)).unwrap());
        assert!(!reduction_semistable_at(&cube, &big(3)).unwrap());
        assert_eq!(max_multiplicity_mod_p(&cube, &big(3)).unwrap(), 3);
        assert!(!reduction_semistable_at(&q(&[1, 3, 3, 1]), &big(5)).unwrap());
        assert_eq!(
            reduction_semistable_at(&q(&[5, 0, 10]), &big(5)),
            Err(Error::VanishesModP(5))
        );
        assert!(matches!(reduction_semistable_at(&cube, &big(4)), Err(Error::NotPrime(_))));
    }

    #[test]
    fn degree_drop_and_frobenius() {
        // 2x^3 + y^3 mod 2 is y^3: triple root at infinity
        assert_eq!(max_multiplicity_mod_p(&q(&[1, 0, 0, 2]), &big(2)).unwrap(), 3);
        // x^4 - y^4 = (x^2 - y^2)^2 = (x - y)^4 mod 2
        assert_eq!(max_multiplicity_mod_p(&q(&[-1, 0, 0, 0, 1]), &big(2)).unwrap(), 4);
        // x^6 + y^6 mod 3 = (x^2 + y^2)^3, two roots of multiplicity 3
        assert_eq!(max_multiplicity_mod_p(&q(&[1, 0, 0, 0, 0, 0, 1]), &big(3)).unwrap(), 3);
        // x^2 y^2 (x^2 - y^2) mod 2 = x^2 y^2 (x - y)^2
        assert_eq!(max_multiplicity_mod_p(&q(&[0, 0, -1, 0, 1, 0, 0]), &big(2)).unwrap(), 2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn large_prime_matches_rational_multiplicity(
            coeffs in (1usize..=6).prop_flat_map(|d| prop::collection::vec(-5i64..=5, d + 1)),
        ) {
            prop_assume!(coeffs.iter().any(|&c| c != 0));
            let f = q(&coeffs);
            // reduction mod a prime larger than all discriminant factors keeps the structure
            let p = big(1_000_000_007);
            prop_assert!(max_multiplicity_mod_p(&f, &p).unwrap() >= max_multiplicity(&f).unwrap());
        }
    }
}
