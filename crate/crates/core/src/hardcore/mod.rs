//! Independence polynomials, the hard-core distribution and its samplers.

pub mod engine;
mod sample;

pub use sample::{exact_sample, glauber_sample, ExactSampler, GlauberChain, HardCoreSample, SampleMethod, SamplerMode};

use crate::graph::Graph;
use engine::{OccupancyAlgebra, PartitionEngine, PolynomialAlgebra, RationalAlgebra};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

/// Default vertex cap for exact polynomial computation.
pub const POLYNOMIAL_CAP: usize = 40;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HardcoreError {
    #[error("fugacity must be positive and finite, got {0}")]
    InvalidFugacity(f64),
    #[error("empty graph")]
    EmptyGraph,
    #[error("exact computation on {n} vertices exceeds cap {cap}; use log-evaluation or Glauber sampling instead")]
    CapExceeded { n: usize, cap: usize },
    #[error("exact partition function exceeded its work budget of {budget} expansions")]
    WorkBudgetExceeded { budget: usize },
}

/// The fugacity λ > 0 of the hard-core model.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Fugacity(f64);

impl Fugacity {
    pub fn new(lambda: f64) -> Result<Fugacity, HardcoreError> {
        if lambda.is_finite() && lambda > 0.0 {
            Ok(Fugacity(lambda))
        } else {
            Err(HardcoreError::InvalidFugacity(lambda))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `λ/(1+λ)`, the occupation probability of an isolated vertex.
    pub fn ratio(self) -> f64 {
        self.0 / (1.0 + self.0)
    }

    /// `log(1+λ)`.
    pub fn log1p(self) -> f64 {
        self.0.ln_1p()
    }

    /// The exact rational value of the underlying double.
    pub fn to_rational(self) -> BigRational {
        BigRational::from_float(self.0).expect("finite")
    }
}

/// Coefficient `i` counts the independent sets of size `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndependencePolynomial {
    #[serde(serialize_with = "serialize_coeffs")]
    coeffs: Vec<BigUint>,
}

fn serialize_coeffs<S: serde::Serializer>(c: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(c.len()))?;
    for x in c {
        match x.to_u64() {
            Some(v) => seq.serialize_element(&v)?,
            None => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

impl IndependencePolynomial {
    pub fn from_coefficients(coeffs: Vec<BigUint>) -> Self {
        assert!(!coeffs.is_empty(), "a polynomial has at least the constant term");
        IndependencePolynomial { coeffs }
    }

    pub fn coefficients(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn independence_number(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Total number of independent sets, `Z(1)`.
    pub fn count(&self) -> BigUint {
        self.coeffs.iter().sum()
    }

    /// `Z(λ)` by Horner's rule.
    pub fn evaluate(&self, lambda: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * lambda + c.to_f64().unwrap())
    }

    /// `λZ'(λ)`.
    pub fn lambda_derivative(&self, lambda: f64) -> f64 {
        self.coeffs.iter().enumerate().rev().fold(0.0, |acc, (i, c)| acc * lambda + i as f64 * c.to_f64().unwrap())
    }

    /// Expected size `λZ'(λ)/Z(λ)` of a hard-core sample.
    pub fn expected_size(&self, lambda: f64) -> f64 {
        self.lambda_derivative(lambda) / self.evaluate(lambda)
    }

    pub fn evaluate_exact(&self, lambda: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * lambda + BigRational::from_integer(c.clone().into()))
    }

    pub fn lambda_derivative_exact(&self, lambda: &BigRational) -> BigRational {
        self.coeffs.iter().enumerate().rev().fold(BigRational::zero(), |acc, (i, c)| {
            acc * lambda + BigRational::from_integer((c * BigUint::from(i)).into())
        })
    }

    pub fn expected_size_exact(&self, lambda: &BigRational) -> BigRational {
        self.lambda_derivative_exact(lambda) / self.evaluate_exact(lambda)
    }
}

/// Exact independence polynomial for graphs on at most [`POLYNOMIAL_CAP`] vertices.
pub fn independence_polynomial(g: &Graph) -> Result<IndependencePolynomial, HardcoreError> {
    independence_polynomial_with_cap(g, POLYNOMIAL_CAP)
}

pub fn independence_polynomial_with_cap(g: &Graph, cap: usize) -> Result<IndependencePolynomial, HardcoreError> {
    if g.n() > cap {
        return Err(HardcoreError::CapExceeded { n: g.n(), cap });
    }
    let mut engine = PartitionEngine::new(g, PolynomialAlgebra);
    let mut coeffs = engine.total()?;
    // The recursion never produces trailing zeros, but keep the invariant explicit.
    while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    Ok(IndependencePolynomial { coeffs })
}

/// Occupancy fraction `λZ'/(Z·n)` from exact coefficients.
pub fn occupancy_fraction(g: &Graph, lambda: Fugacity) -> Result<f64, HardcoreError> {
    if g.n() == 0 {
        return Err(HardcoreError::EmptyGraph);
    }
    let p = independence_polynomial(g)?;
    Ok(p.expected_size(lambda.value()) / g.n() as f64)
}

pub fn occupancy_fraction_exact(g: &Graph, lambda: &BigRational) -> Result<BigRational, HardcoreError> {
    if g.n() == 0 {
        return Err(HardcoreError::EmptyGraph);
    }
    let p = independence_polynomial(g)?;
    Ok(p.expected_size_exact(lambda) / BigRational::from_integer(g.n().into()))
}

/// `(Z, λZ')` in floating point without a vertex cap; cost grows with the
/// graph's structure rather than its size.
pub fn partition_pair(g: &Graph, lambda: Fugacity) -> Result<(f64, f64), HardcoreError> {
    PartitionEngine::new(g, OccupancyAlgebra { lambda: lambda.value() }).total()
}

/// Exact `Z(λ)` at a rational fugacity.
pub fn partition_exact(g: &Graph, lambda: &BigRational) -> Result<BigRational, HardcoreError> {
    if lambda <= &BigRational::zero() {
        return Err(HardcoreError::InvalidFugacity(lambda.to_f64().unwrap_or(f64::NAN)));
    }
    PartitionEngine::new(g, RationalAlgebra { lambda: lambda.clone() }).total()
}

/// `λ/(1+λ)` in exact arithmetic.
pub fn exact_ratio(lambda: &BigRational) -> BigRational {
    lambda / (BigRational::one() + lambda)
}
