//! Exact sampling by sequential conditioning, and single-site Glauber dynamics.

use super::engine::{LogAlgebra, PartitionEngine};
use super::{Fugacity, HardcoreError};
use crate::bitset::VertexSet;
use crate::graph::Graph;
use rand::Rng;
use serde::Serialize;

/// Default expansion budget for exact sampling.
pub const EXACT_SAMPLE_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase", tag = "method")]
pub enum SampleMethod {
    Exact,
    Glauber { steps: u64 },
}

/// An independent set drawn from (or approximately from) the hard-core model.
#[derive(Debug, Clone, PartialEq)]
pub struct HardCoreSample {
    pub set: VertexSet,
    pub method: SampleMethod,
}

/// Exact sampler; the memo is shared across draws on the same host graph.
pub struct ExactSampler<'g> {
    engine: PartitionEngine<'g, LogAlgebra>,
    lambda: Fugacity,
}

impl<'g> ExactSampler<'g> {
    pub fn new(g: &'g Graph, lambda: Fugacity) -> Self {
        Self::with_budget(g, lambda, EXACT_SAMPLE_BUDGET)
    }

    pub fn with_budget(g: &'g Graph, lambda: Fugacity, budget: usize) -> Self {
        ExactSampler { engine: PartitionEngine::with_budget(g, LogAlgebra::new(lambda.value()), budget), lambda }
    }

    pub fn lambda(&self) -> Fugacity {
        self.lambda
    }

    /// Samples from the hard-core model on `G[set]`: the lowest remaining
    /// vertex `v` joins with probability `λ·Z(C − N[v])/Z(C)` where `C` is its
    /// component, and the residual set shrinks accordingly.
    pub fn sample_within<R: Rng + ?Sized>(&mut self, set: &VertexSet, rng: &mut R) -> Result<VertexSet, HardcoreError> {
        let g = self.engine.graph();
        let mut residual = set.clone();
        let mut out = VertexSet::new(g.n());
        while let Some(v) = residual.first() {
            let comp = g
                .components_within(&residual)
                .into_iter()
                .find(|c| c.contains(v))
                .expect("v lies in some component");
            let closed = g.closed_neighbourhood(v);
            let z = self.engine.partition(&comp)?;
            let rest = comp.difference(&closed);
            let z_in = self.engine.partition(&rest)? + self.lambda.value().ln();
            let p = (z_in - z).exp();
            if rng.gen::<f64>() < p {
                out.insert(v);
                residual.difference_with(&closed);
            } else {
                residual.remove(v);
            }
        }
        Ok(out)
    }

    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<HardCoreSample, HardcoreError> {
        let all = self.engine.graph().vertex_set();
        Ok(HardCoreSample { set: self.sample_within(&all, rng)?, method: SampleMethod::Exact })
    }
}

/// One exact draw from the hard-core model on `g`.
pub fn exact_sample<R: Rng + ?Sized>(g: &Graph, lambda: Fugacity, rng: &mut R) -> Result<HardCoreSample, HardcoreError> {
    ExactSampler::new(g, lambda).sample(rng)
}

/// Heat-bath Glauber dynamics restricted to a vertex set, started from ∅.
pub struct GlauberChain<'g> {
    graph: &'g Graph,
    members: Vec<usize>,
    state: VertexSet,
    ratio: f64,
    steps: u64,
}

impl<'g> GlauberChain<'g> {
    pub fn new(graph: &'g Graph, set: &VertexSet, lambda: Fugacity) -> Self {
        GlauberChain { graph, members: set.to_vec(), state: VertexSet::new(graph.n()), ratio: lambda.ratio(), steps: 0 }
    }

    /// Picks a uniform vertex; if it has no occupied neighbour it becomes
    /// occupied with probability `λ/(1+λ)`, otherwise it is vacated.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        self.steps += 1;
        if self.members.is_empty() {
            return;
        }
        let v = self.members[rng.gen_range(0..self.members.len())];
        let free = !self.graph.adjacency(v).intersects(&self.state);
        if free && rng.gen::<f64>() < self.ratio {
            self.state.insert(v);
        } else {
            self.state.remove(v);
        }
    }

    pub fn run<R: Rng + ?Sized>(&mut self, steps: u64, rng: &mut R) {
        for _ in 0..steps {
            self.step(rng);
        }
    }

    pub fn state(&self) -> &VertexSet {
        &self.state
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }
}

/// State of Glauber dynamics on `g` after `steps` updates from the empty set.
pub fn glauber_sample<R: Rng + ?Sized>(g: &Graph, lambda: Fugacity, steps: u64, rng: &mut R) -> HardCoreSample {
    let mut chain = GlauberChain::new(g, &g.vertex_set(), lambda);
    chain.run(steps, rng);
    HardCoreSample { set: chain.state, method: SampleMethod::Glauber { steps } }
}

/// How samplers inside larger procedures draw hard-core sets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase", tag = "mode")]
pub enum SamplerMode {
    /// Exact sampling; fails once the expansion budget is spent.
    Exact { budget: usize },
    /// Glauber dynamics for `sweeps · |S|` steps.
    Glauber { sweeps: u64 },
    /// Exact when the budget suffices, otherwise Glauber.
    Auto { budget: usize, sweeps: u64 },
}

impl Default for SamplerMode {
    fn default() -> Self {
        SamplerMode::Auto { budget: 200_000, sweeps: 50 }
    }
}

impl SamplerMode {
    /// A hard-core sample on `G[set]`, together with the method actually used.
    pub fn sample_within<R: Rng + ?Sized>(
        &self,
        g: &Graph,
        set: &VertexSet,
        lambda: Fugacity,
        rng: &mut R,
    ) -> Result<(VertexSet, SampleMethod), HardcoreError> {
        let glauber = |sweeps: u64, rng: &mut R| {
            let steps = sweeps * set.len() as u64;
            let mut chain = GlauberChain::new(g, set, lambda);
            chain.run(steps, rng);
            (chain.state, SampleMethod::Glauber { steps })
        };
        match *self {
            SamplerMode::Exact { budget } => {
                Ok((ExactSampler::with_budget(g, lambda, budget).sample_within(set, rng)?, SampleMethod::Exact))
            }
            SamplerMode::Glauber { sweeps } => Ok(glauber(sweeps, rng)),
            SamplerMode::Auto { budget, sweeps } => {
                // The probe usually settles feasibility before any randomness is
                // consumed, but the draw visits sets the probe did not and can still run out.
                let mut sampler = ExactSampler::with_budget(g, lambda, budget);
                match sampler.engine.partition(set).and_then(|_| sampler.sample_within(set, rng)) {
                    Ok(s) => Ok((s, SampleMethod::Exact)),
                    Err(HardcoreError::WorkBudgetExceeded { .. }) => Ok(glauber(sweeps, rng)),
                    Err(e) => Err(e),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle};
    use crate::seeded_rng;

    #[test]
    fn exact_k2_distribution() {
        let g = complete(2);
        let lambda = Fugacity::new(1.0).unwrap();
        let mut rng = seeded_rng(7);
        let mut sampler = ExactSampler::new(&g, lambda);
        let mut counts = [0usize; 3];
        let draws = 60_000;
        for _ in 0..draws {
            let s = sampler.sample(&mut rng).unwrap().set;
            let idx = if s.is_empty() { 0 } else if s.contains(0) { 1 } else { 2 };
            counts[idx] += 1;
        }
        for c in counts {
            let p = c as f64 / draws as f64;
            // 1/3 each; 5σ with σ ≈ 0.0019.
            assert!((p - 1.0 / 3.0).abs() < 0.01, "{counts:?}");
        }
    }

    #[test]
    fn exact_k1_occupancy() {
        let g = complete(1);
        let lambda = Fugacity::new(3.0).unwrap();
        let mut rng = seeded_rng(3);
        let mut sampler = ExactSampler::new(&g, lambda);
        let hits = (0..40_000).filter(|_| !sampler.sample(&mut rng).unwrap().set.is_empty()).count();
        assert!((hits as f64 / 40_000.0 - 0.75).abs() < 0.011);
    }

    #[test]
    fn samples_are_independent_sets() {
        let g = crate::graph::erdos_renyi(16, 0.3, 5).unwrap();
        let mut rng = seeded_rng(11);
        for lambda in [0.1, 1.0, 50.0] {
            let lambda = Fugacity::new(lambda).unwrap();
            for _ in 0..200 {
                assert!(g.is_independent(&exact_sample(&g, lambda, &mut rng).unwrap().set));
                assert!(g.is_independent(&glauber_sample(&g, lambda, 100, &mut rng).set));
            }
        }
    }

    #[test]
    fn glauber_zero_steps_is_empty() {
        let g = cycle(5).unwrap();
        let mut rng = seeded_rng(1);
        let s = glauber_sample(&g, Fugacity::new(1.0).unwrap(), 0, &mut rng);
        assert!(s.set.is_empty());
    }

    #[test]
    fn glauber_edgeless_mean_size() {
        let g = Graph::edgeless(3);
        let lambda = Fugacity::new(1.0).unwrap();
        let mut rng = seeded_rng(2);
        let mut chain = GlauberChain::new(&g, &g.vertex_set(), lambda);
        chain.run(1000, &mut rng);
        let steps = 100_000;
        let mut total = 0usize;
        for _ in 0..steps {
            chain.step(&mut rng);
            total += chain.state().len();
        }
        let mean = total as f64 / steps as f64;
        assert!((mean - 1.5).abs() < 0.05, "{mean}");
    }

    #[test]
    fn auto_mode_falls_back_to_glauber() {
        let g = cycle(40).unwrap();
        let lambda = Fugacity::new(1.0).unwrap();
        let mut rng = seeded_rng(4);
        let (s, method) = SamplerMode::Auto { budget: 2, sweeps: 3 }.sample_within(&g, &g.vertex_set(), lambda, &mut rng).unwrap();
        assert_eq!(method, SampleMethod::Glauber { steps: 120 });
        assert!(g.is_independent(&s));
        let (_, method) = SamplerMode::default().sample_within(&g, &g.vertex_set(), lambda, &mut rng).unwrap();
        assert_eq!(method, SampleMethod::Exact);
    }

    #[test]
    fn auto_mode_never_surfaces_a_budget_error() {
        // Budgets just large enough for the probe but not for the draw.
        let g = crate::graph::erdos_renyi(30, 0.15, 1).unwrap();
        let lambda = Fugacity::new(1.0).unwrap();
        for budget in (1..400).step_by(7) {
            let mut rng = seeded_rng(budget as u64);
            let (s, _) = SamplerMode::Auto { budget, sweeps: 2 }.sample_within(&g, &g.vertex_set(), lambda, &mut rng).unwrap();
            assert!(g.is_independent(&s));
        }
    }
}
