//! Heights of binary forms over ℚ and of points in weighted projective space.
//!
//! Coefficients are exact rationals; archimedean quantities are computed in
//! floating point, generic over [`scalar::Real`] so the same kernels run in
//! `f64` or in double-double precision.

pub mod arith;
pub mod error;
pub mod forms;
pub mod heights;
pub mod invariants;
pub mod scalar;
pub mod weighted;

pub use error::{Error, Result};

/// Exact rational scalar used for coefficients and invariant values.
pub type Rational = num_rational::BigRational;
/// Double-double scalar used by the extended-precision mode.
pub type Ext = twofloat::TwoFloat;
