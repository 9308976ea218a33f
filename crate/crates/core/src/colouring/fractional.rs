//! Greedy fractional colouring by a time sweep of hard-core samples.

use super::{ColouringError, FailureReport, Phase};
use crate::bitset::VertexSet;
use crate::graph::Graph;
use crate::hardcore::{Fugacity, SamplerMode};
use rand::Rng;
use serde::Serialize;

/// Slack for comparing interval end points against budgets.
const EDGE_TOLERANCE: f64 = 1e-12;

/// An independent set given the interval `[start, start + weight)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FractionalPart {
    pub members: Vec<usize>,
    pub start: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FractionalColouring {
    pub parts: Vec<FractionalPart>,
    pub budgets: Vec<f64>,
    pub step: f64,
}

impl FractionalColouring {
    /// Checks independence of every part, total weight at least 1 per vertex,
    /// pairwise disjoint intervals per vertex, and intervals inside `[0, c_u]`.
    pub fn check(&self, g: &Graph) -> Result<(), String> {
        let mut spans: Vec<Vec<(f64, f64)>> = vec![vec![]; g.n()];
        for (i, p) in self.parts.iter().enumerate() {
            if !(p.weight > 0.0) {
                return Err(format!("part {i} has weight {}", p.weight));
            }
            let set = VertexSet::from_indices(g.n(), p.members.iter().copied());
            if !g.is_independent(&set) {
                return Err(format!("part {i} is not independent"));
            }
            for &u in &p.members {
                spans[u].push((p.start, p.start + p.weight));
            }
        }
        for (u, s) in spans.iter_mut().enumerate() {
            s.sort_by(|a, b| a.0.total_cmp(&b.0));
            let total: f64 = s.iter().map(|(a, b)| b - a).sum();
            if total < 1.0 - EDGE_TOLERANCE {
                return Err(format!("vertex {u} has total weight {total}"));
            }
            if s.windows(2).any(|w| w[1].0 < w[0].1 - EDGE_TOLERANCE) {
                return Err(format!("vertex {u} has overlapping intervals"));
            }
            if s.iter().any(|&(a, b)| a < 0.0 || b > self.budgets[u] + EDGE_TOLERANCE) {
                return Err(format!("vertex {u} is coloured outside [0, {}]", self.budgets[u]));
            }
        }
        Ok(())
    }
}

/// The default sweep step, 1/64 of the smallest budget.
pub fn default_step(budgets: &[f64]) -> f64 {
    budgets.iter().copied().fold(f64::INFINITY, f64::min) / 64.0
}

/// Sweeps `τ = 0, δw, 2δw, …`; at each step samples a hard-core set on the
/// vertices that still need weight and whose budget fits `[τ, τ + δw)`, and
/// gives it that interval. A vertex is done once it has `⌈1/δw⌉` steps.
pub fn fractional_greedy<R: Rng + ?Sized>(
    g: &Graph,
    lambda: Fugacity,
    budgets: &[f64],
    step: f64,
    sampler: SamplerMode,
    rng: &mut R,
) -> Result<FractionalColouring, ColouringError> {
    if budgets.len() != g.n() {
        return Err(ColouringError::InvalidInput(format!("{} budgets for {} vertices", budgets.len(), g.n())));
    }
    if !(step > 0.0 && step.is_finite()) || budgets.iter().any(|&c| !(c > 0.0 && c.is_finite())) {
        return Err(ColouringError::InvalidInput("budgets and step must be positive and finite".into()));
    }
    // Counting whole steps avoids drift from accumulating float weights.
    let need = (1.0 / step - EDGE_TOLERANCE).ceil() as u64;
    let mut remaining = vec![need; g.n()];
    let mut parts = Vec::new();
    let mut t: u64 = 0;
    while remaining.iter().any(|&r| r > 0) {
        let start = t as f64 * step;
        if let Some(u) = (0..g.n()).find(|&u| remaining[u] > 0 && start + step > budgets[u] + EDGE_TOLERANCE) {
            return Err(ColouringError::Failure(FailureReport {
                phase: Phase::Fractional,
                vertex: Some(u),
                reason: format!("budget {} exhausted with {} of {need} steps missing", budgets[u], remaining[u]),
                rounds: t,
                trace: vec![],
            }));
        }
        let active = VertexSet::from_indices(g.n(), (0..g.n()).filter(|&u| remaining[u] > 0));
        let (set, _) = sampler.sample_within(g, &active, lambda, rng)?;
        if !set.is_empty() {
            for u in set.iter() {
                remaining[u] -= 1;
            }
            parts.push(FractionalPart { members: set.to_vec(), start, weight: step });
        }
        t += 1;
    }
    Ok(FractionalColouring { parts, budgets: budgets.to_vec(), step })
}
