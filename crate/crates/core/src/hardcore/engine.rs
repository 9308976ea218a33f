//! Memoized vertex-removal recursion `Z(S) = Z(S − v) + λ·Z(S − N[v])`.
//!
//! The recursion is written once over an [`Algebra`] so the same search yields
//! exact polynomials, log-weights for sampling, value/derivative pairs and
//! exact rationals. Residual sets split into connected components, cliques are
//! closed in one step, and pivots are maximum-degree vertices.

use super::HardcoreError;
use crate::bitset::VertexSet;
use crate::graph::Graph;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;

pub trait Algebra {
    type Value: Clone;
    fn one(&self) -> Self::Value;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn times_lambda(&self, a: &Self::Value) -> Self::Value;
    /// Partition function of the complete graph `K_k`, i.e. `1 + kλ`.
    fn clique(&self, k: usize) -> Self::Value;
}

/// Integer coefficient vectors.
pub struct PolynomialAlgebra;

impl Algebra for PolynomialAlgebra {
    type Value = Vec<BigUint>;

    fn one(&self) -> Vec<BigUint> {
        vec![BigUint::one()]
    }

    fn add(&self, a: &Vec<BigUint>, b: &Vec<BigUint>) -> Vec<BigUint> {
        let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
        let mut out = long.clone();
        for (o, s) in out.iter_mut().zip(short) {
            *o += s;
        }
        out
    }

    fn mul(&self, a: &Vec<BigUint>, b: &Vec<BigUint>) -> Vec<BigUint> {
        let mut out = vec![BigUint::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    fn times_lambda(&self, a: &Vec<BigUint>) -> Vec<BigUint> {
        let mut out = Vec::with_capacity(a.len() + 1);
        out.push(BigUint::zero());
        out.extend(a.iter().cloned());
        out
    }

    fn clique(&self, k: usize) -> Vec<BigUint> {
        if k == 0 {
            vec![BigUint::one()]
        } else {
            vec![BigUint::one(), BigUint::from(k)]
        }
    }
}

/// `log Z` in floating point.
pub struct LogAlgebra {
    lambda: f64,
    log_lambda: f64,
}

impl LogAlgebra {
    pub fn new(lambda: f64) -> Self {
        LogAlgebra { lambda, log_lambda: lambda.ln() }
    }
}

impl Algebra for LogAlgebra {
    type Value = f64;

    fn one(&self) -> f64 {
        0.0
    }

    fn add(&self, a: &f64, b: &f64) -> f64 {
        let (hi, lo) = if a >= b { (*a, *b) } else { (*b, *a) };
        hi + (lo - hi).exp().ln_1p()
    }

    fn mul(&self, a: &f64, b: &f64) -> f64 {
        a + b
    }

    fn times_lambda(&self, a: &f64) -> f64 {
        a + self.log_lambda
    }

    fn clique(&self, k: usize) -> f64 {
        (k as f64 * self.lambda).ln_1p()
    }
}

/// Pairs `(Z, λZ')` in floating point; suitable for graphs of moderate size.
pub struct OccupancyAlgebra {
    pub lambda: f64,
}

impl Algebra for OccupancyAlgebra {
    type Value = (f64, f64);

    fn one(&self) -> (f64, f64) {
        (1.0, 0.0)
    }

    fn add(&self, a: &(f64, f64), b: &(f64, f64)) -> (f64, f64) {
        (a.0 + b.0, a.1 + b.1)
    }

    fn mul(&self, a: &(f64, f64), b: &(f64, f64)) -> (f64, f64) {
        (a.0 * b.0, a.1 * b.0 + a.0 * b.1)
    }

    fn times_lambda(&self, a: &(f64, f64)) -> (f64, f64) {
        // λ·d/dλ(λZ) = λZ + λ·(λZ').
        (self.lambda * a.0, self.lambda * (a.0 + a.1))
    }

    fn clique(&self, k: usize) -> (f64, f64) {
        let kl = k as f64 * self.lambda;
        (1.0 + kl, kl)
    }
}

/// Exact rational values of `Z` at a rational fugacity.
pub struct RationalAlgebra {
    pub lambda: BigRational,
}

impl Algebra for RationalAlgebra {
    type Value = BigRational;

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn times_lambda(&self, a: &BigRational) -> BigRational {
        a * &self.lambda
    }

    fn clique(&self, k: usize) -> BigRational {
        BigRational::one() + &self.lambda * BigRational::from_integer(k.into())
    }
}

/// Partition functions of induced subgraphs `G[S]` of one host graph.
pub struct PartitionEngine<'g, A: Algebra> {
    graph: &'g Graph,
    algebra: A,
    memo: HashMap<VertexSet, A::Value>,
    budget: usize,
    expansions: usize,
}

impl<'g, A: Algebra> PartitionEngine<'g, A> {
    pub fn new(graph: &'g Graph, algebra: A) -> Self {
        Self::with_budget(graph, algebra, usize::MAX)
    }

    /// `budget` bounds the number of pivot expansions before giving up.
    pub fn with_budget(graph: &'g Graph, algebra: A, budget: usize) -> Self {
        PartitionEngine { graph, algebra, memo: HashMap::new(), budget, expansions: 0 }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn algebra(&self) -> &A {
        &self.algebra
    }

    pub fn expansions(&self) -> usize {
        self.expansions
    }

    /// `Z` of the whole host graph.
    pub fn total(&mut self) -> Result<A::Value, HardcoreError> {
        let all = self.graph.vertex_set();
        self.partition(&all)
    }

    /// `Z` of `G[set]`.
    pub fn partition(&mut self, set: &VertexSet) -> Result<A::Value, HardcoreError> {
        if set.is_empty() {
            return Ok(self.algebra.one());
        }
        if let Some(v) = self.memo.get(set) {
            return Ok(v.clone());
        }
        let comps = self.graph.components_within(set);
        if comps.len() == 1 {
            return self.connected(set);
        }
        let mut value = self.algebra.one();
        for c in &comps {
            let z = self.connected(c)?;
            value = self.algebra.mul(&value, &z);
        }
        Ok(value)
    }

    /// `Z` of `G[comp]` for a connected vertex set.
    fn connected(&mut self, comp: &VertexSet) -> Result<A::Value, HardcoreError> {
        if let Some(v) = self.memo.get(comp) {
            return Ok(v.clone());
        }
        let size = comp.len();
        let mut pivot = (0, usize::MAX);
        for v in comp.iter() {
            let d = self.graph.adjacency(v).intersection_len(comp);
            if pivot.1 == usize::MAX || d > pivot.0 {
                pivot = (d, v);
            }
        }
        let value = if size == 1 || comp.iter().all(|v| self.graph.adjacency(v).intersection_len(comp) + 1 == size) {
            self.algebra.clique(size)
        } else {
            self.expansions += 1;
            if self.expansions > self.budget {
                return Err(HardcoreError::WorkBudgetExceeded { budget: self.budget });
            }
            let v = pivot.1;
            let mut without = comp.clone();
            without.remove(v);
            let outside = comp.difference(&self.graph.closed_neighbourhood(v));
            let a = self.partition(&without)?;
            let b = self.partition(&outside)?;
            self.algebra.add(&a, &self.algebra.times_lambda(&b))
        };
        self.memo.insert(comp.clone(), value.clone());
        Ok(value)
    }
}
