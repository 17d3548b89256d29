use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("zero input: {0}")]
    Zero(&'static str),
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("binary form has all coefficients zero")]
    ZeroForm,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("degree {degree} unsupported: {supported}")]
    UnsupportedDegree { degree: usize, supported: &'static str },
    #[error("transvectant order {k} exceeds form degrees ({m}, {n})")]
    TransvectantOrder { k: usize, m: usize, n: usize },
    #[error("form is in the nullcone (root of multiplicity {max_multiplicity} > {degree}/2): {what}")]
    Nullcone { degree: usize, max_multiplicity: usize, what: &'static str },
    #[error("form has repeated roots; {0}")]
    RepeatedRoots(&'static str),
    #[error("root finder did not converge for form {form}")]
    RootFinder { form: String },
    #[error("iteration did not converge after {iterations} steps (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("point lies on the divisor of the section")]
    OnDivisor,
    #[error("form must have integral coefficients")]
    NotIntegral,
    #[error("form vanishes identically modulo {0}")]
    VanishesModP(u64),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid input: {0}")]
    Invalid(String),
}
