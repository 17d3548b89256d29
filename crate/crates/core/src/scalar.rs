//! Scalar abstractions shared by the exact and floating-point code paths.
//!
//! Form arithmetic (evaluation, substitution, transvectants) only needs a
//! commutative ring with exact division by small integers, so it is written
//! against [`Field`]. The numeric side (root polishing, Chow norms, the
//! coset optimizer) is written against [`Real`], which is implemented for
//! `f64` and for the double-double [`twofloat::TwoFloat`] used by the
//! extended-precision mode.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, One, ToPrimitive, Zero};
use twofloat::TwoFloat;

/// Commutative ring elements usable as form coefficients.
pub trait Ring:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(n: i64) -> Self;
}

/// A ring in which division by nonzero integers is exact.
pub trait Field: Ring + Div<Output = Self> {}

impl<T> Field for T where T: Ring + Div<Output = T> {}

impl Ring for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

impl Ring for BigInt {
    fn from_i64(n: i64) -> Self {
        BigInt::from(n)
    }
}

impl Ring for f64 {
    fn from_i64(n: i64) -> Self {
        n as f64
    }
}

impl Ring for TwoFloat {
    fn from_i64(n: i64) -> Self {
        TwoFloat::from(n as f64)
    }
}

impl<T: Ring + num_traits::Num> Ring for num_complex::Complex<T> {
    fn from_i64(n: i64) -> Self {
        num_complex::Complex::new(T::from_i64(n), T::zero())
    }
}

/// Rings containing ℚ, so rational constants can multiply elements.
pub trait QAlgebra: Ring {
    fn mul_rational(&self, q: &BigRational) -> Self;
}

impl QAlgebra for BigRational {
    fn mul_rational(&self, q: &BigRational) -> Self {
        self * q
    }
}

impl QAlgebra for f64 {
    fn mul_rational(&self, q: &BigRational) -> Self {
        self * rational_to_f64(q)
    }
}

/// Real floating-point scalars used by the numeric kernels.
pub trait Real: Float + FromPrimitive + Ring + Send + Sync + 'static {
    /// Nearest representable value of an exact rational.
    fn from_rational(q: &BigRational) -> Self;

    fn from_f64_exact(x: f64) -> Self;

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Machine epsilon of the representation.
    fn eps() -> Self;

    /// Natural logarithm accurate to the working precision.
    fn ln_exact(self) -> Self {
        self.ln()
    }
}

impl Real for f64 {
    fn from_rational(q: &BigRational) -> Self {
        rational_to_f64(q)
    }

    fn from_f64_exact(x: f64) -> Self {
        x
    }

    fn eps() -> Self {
        f64::EPSILON
    }
}

impl Real for TwoFloat {
    fn from_rational(q: &BigRational) -> Self {
        let hi = rational_to_f64(q);
        if !hi.is_finite() || hi == 0.0 {
            return TwoFloat::from(hi);
        }
        let hi_exact = BigRational::from_float(hi).expect("finite float");
        let lo = rational_to_f64(&(q - hi_exact));
        TwoFloat::new_add(hi, lo)
    }

    fn from_f64_exact(x: f64) -> Self {
        TwoFloat::from(x)
    }

    fn eps() -> Self {
        TwoFloat::from(2f64.powi(-104))
    }

    // twofloat's own ln loses about 7 bits near 2
    fn ln_exact(self) -> Self {
        let hi = self.hi();
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(hi > 0.0) || !hi.is_finite() {
            return TwoFloat::from(hi.ln());
        }
        let k = hi.log2().round() as i32;
        let m = self * TwoFloat::from(2f64.powi(-k));
        let one = TwoFloat::from(1.0);
        // ln m = 2 atanh s
        let s = dd_div(m - one, m + one);
        let s2 = s * s;
        let (mut sum, mut term) = (s, s);
        for n in 1..60 {
            term *= s2;
            let t = term / (2 * n + 1) as f64;
            sum += t;
            if t.hi().abs() < 1e-33 * sum.hi().abs() {
                break;
            }
        }
        let ln2 = TwoFloat::new_add(std::f64::consts::LN_2, 2.3190468138462996e-17);
        sum * TwoFloat::from(2.0) + ln2 * TwoFloat::from(k as f64)
    }
}

/// Double-double quotient. twofloat's `TwoFloat / TwoFloat` is only
/// accurate to about 2⁻⁵³, so one residual correction is applied.
pub fn dd_div(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let q = a / b;
    q + (a - q * b) / b.hi()
}

/// Correctly scaled conversion that does not overflow for huge numerators
/// and denominators whose ratio is representable.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let sign = if q.numer().sign() == Sign::Minus { -1.0 } else { 1.0 };
    let n = q.numer().magnitude();
    let d = q.denom().magnitude();
    let (nb, db) = (n.bits() as i64, d.bits() as i64);
    // keep 64 significant bits of each side, then rescale by the dropped bits
    let ns = nb.saturating_sub(64).max(0);
    let ds = db.saturating_sub(64).max(0);
    let nt = (n >> ns as usize).to_f64().unwrap_or(f64::INFINITY);
    let dt = (d >> ds as usize).to_f64().unwrap_or(f64::INFINITY);
    let shift = ns - ds;
    let mut r = nt / dt;
    if shift > 1000 {
        r *= 2f64.powi(1000);
        r *= 2f64.powi((shift - 1000).min(1100) as i32);
    } else if shift < -1000 {
        r *= 2f64.powi(-1000);
        r *= 2f64.powi((shift + 1000).max(-1100) as i32);
    } else {
        r *= 2f64.powi(shift as i32);
    }
    sign * r
}

/// `ln |q|` for a nonzero rational without overflowing through `f64`.
pub fn ln_abs_rational(q: &BigRational) -> f64 {
    ln_abs_bigint(q.numer()) - ln_abs_bigint(q.denom())
}

pub fn ln_abs_bigint(n: &BigInt) -> f64 {
    let m = n.magnitude();
    let bits = m.bits();
    if bits <= 1000 {
        return m.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (m >> shift as usize).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}
