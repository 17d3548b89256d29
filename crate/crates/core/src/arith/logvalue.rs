use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A formal ℚ-linear combination `Σ cₚ·log p` of prime logarithms.
///
/// Every logarithm of a nonzero rational, and every rational power of one,
/// lives in this space exactly; floats appear only through [`LogValue::to_f64`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LogValue {
    terms: BTreeMap<BigUint, BigRational>,
}

impl LogValue {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn prime(p: BigUint, coeff: BigRational) -> Self {
        let mut v = Self::zero();
        v.add_term(p, coeff);
        v
    }

    pub fn add_term(&mut self, p: BigUint, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(p.clone()).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigUint, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, p: &BigUint) -> BigRational {
        self.terms.get(p).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LogValue {
            terms: self.terms.iter().map(|(p, a)| (p.clone(), a * c)).collect(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(p, c)| crate::scalar::rational_to_f64(c) * ln_prime(p))
            .sum()
    }
}

fn ln_prime(p: &BigUint) -> f64 {
    match p.to_u64() {
        Some(s) => (s as f64).ln(),
        None => crate::scalar::ln_abs_bigint(&BigInt::from(p.clone())),
    }
}

impl Add for LogValue {
    type Output = LogValue;
    fn add(mut self, rhs: LogValue) -> LogValue {
        for (p, c) in rhs.terms {
            self.add_term(p, c);
        }
        self
    }
}

impl Neg for LogValue {
    type Output = LogValue;
    fn neg(self) -> LogValue {
        LogValue {
            terms: self.terms.into_iter().map(|(p, c)| (p, -c)).collect(),
        }
    }
}

impl Sub for LogValue {
    type Output = LogValue;
    fn sub(self, rhs: LogValue) -> LogValue {
        self + (-rhs)
    }
}

impl Mul<&BigRational> for &LogValue {
    type Output = LogValue;
    fn mul(self, rhs: &BigRational) -> LogValue {
        self.scale(rhs)
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (p, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})·log {p}")?;
        }
        Ok(())
    }
}

/// Serialized as `[{"coeff": "1/3", "prime": "3"}, ...]`.
impl Serialize for LogValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term {
            coeff: String,
            prime: String,
        }
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (p, c) in &self.terms {
            seq.serialize_element(&Term {
                coeff: c.to_string(),
                prime: p.to_string(),
            })?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for LogValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Term {
            coeff: String,
            prime: String,
        }
        let terms = Vec::<Term>::deserialize(deserializer)?;
        let mut v = LogValue::zero();
        for t in terms {
            let c: BigRational = t.coeff.parse().map_err(serde::de::Error::custom)?;
            let p: BigUint = t.prime.parse().map_err(serde::de::Error::custom)?;
            v.add_term(p, c);
        }
        Ok(v)
    }
}
