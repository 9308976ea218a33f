//! Numeric minimisation of `β_u + γ_u·d_u` subject to local occupancy.
//!
//! Each subgraph `F` contributes a linear constraint `A_F·β + B_F·γ ≥ 1` with
//! `A_F = (λ/(1+λ))/Z_F` and `B_F = λZ'_F/Z_F`. For fixed `γ` the least
//! feasible `β` is the upper envelope of the lines `(1 − B_F·γ)/A_F`, so the
//! objective is convex and piecewise linear in `γ` and its minimum sits at an
//! envelope breakpoint, a box edge, or where the envelope meets the `β` floor.

use super::{
    check_caps, verify_local_occupancy_with, NeighbourhoodTable, OccupancyError, OccupancyParams, OccupancyReport,
    VerifyConfig,
};
use crate::graph::Graph;
use crate::hardcore::Fugacity;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub beta_range: (f64, f64),
    pub gamma_range: (f64, f64),
    pub strong: bool,
    pub verify: VerifyConfig,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { beta_range: (1e-9, 1e9), gamma_range: (1e-9, 1e9), strong: false, verify: VerifyConfig::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchResult {
    pub params: OccupancyParams,
    pub budgets: Vec<f64>,
    /// Re-verification of the returned certificate.
    pub report: OccupancyReport,
}

pub fn numeric_param_search(
    g: &Graph,
    lambda: Fugacity,
    d: &[f64],
    config: &SearchConfig,
) -> Result<SearchResult, OccupancyError> {
    if d.len() != g.n() {
        return Err(OccupancyError::LengthMismatch { given: d.len(), n: g.n() });
    }
    let mut pairs = Vec::with_capacity(g.n());
    for u in 0..g.n() {
        check_caps(g, u, config.strong, &config.verify)?;
        if !(d[u] > 0.0 && d[u].is_finite()) {
            return Err(OccupancyError::InvalidParameter(format!("d must be positive at vertex {u}")));
        }
        let lines = constraint_lines(g, u, lambda, config.strong);
        let (beta, gamma) = minimise(&lines, d[u], config)
            .ok_or_else(|| OccupancyError::SearchFailed { vertex: u, reason: "search box exhausted".into() })?;
        pairs.push((beta, gamma));
    }
    let params = OccupancyParams::per_vertex(lambda, pairs)?.strong(config.strong);
    let report = verify_local_occupancy_with(g, &params, &config.verify)?;
    if !report.verified {
        let vertex = report.witness.as_ref().map_or(0, |w| w.vertex);
        return Err(OccupancyError::SearchFailed { vertex, reason: format!("re-verification gap {}", report.min_gap) });
    }
    Ok(SearchResult { budgets: params.budgets(d), params, report })
}

/// Lines `β ≥ p + q·γ` with `p = 1/A_F` and `q = −B_F/A_F`, deduplicated.
fn constraint_lines(g: &Graph, u: usize, lambda: Fugacity, strong: bool) -> Vec<(f64, f64)> {
    let table = NeighbourhoodTable::new(g, u, lambda);
    let c = lambda.ratio();
    let mut lines = Vec::new();
    let mut push = |z: f64, dz: f64| lines.push((z / c, -dz / c));
    if strong {
        table.visit_subgraphs(|_, _, z, dz| push(z, dz));
    } else {
        for (&z, &dz) in table.z.iter().zip(&table.dz) {
            push(z, dz);
        }
    }
    lines.sort_by(|a, b| a.1.total_cmp(&b.1).then(b.0.total_cmp(&a.0)));
    lines.dedup_by(|b, a| a.1 == b.1);
    lines
}

/// Upper envelope of lines sorted by increasing slope, as indices into `lines`.
fn envelope(lines: &[(f64, f64)]) -> Vec<usize> {
    let cross = |i: usize, j: usize| (lines[i].0 - lines[j].0) / (lines[j].1 - lines[i].1);
    let mut hull: Vec<usize> = Vec::new();
    for k in 0..lines.len() {
        while hull.len() >= 2 {
            let (i, j) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            if cross(i, k) <= cross(i, j) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    hull
}

fn minimise(lines: &[(f64, f64)], d: f64, config: &SearchConfig) -> Option<(f64, f64)> {
    let (b_lo, b_hi) = config.beta_range;
    let (g_lo, g_hi) = config.gamma_range;
    let least_beta = |gamma: f64| lines.iter().map(|&(p, q)| p + q * gamma).fold(b_lo, f64::max);
    let hull = envelope(lines);
    let mut candidates = vec![g_lo, g_hi];
    for w in hull.windows(2) {
        let (i, j) = (w[0], w[1]);
        candidates.push((lines[i].0 - lines[j].0) / (lines[j].1 - lines[i].1));
    }
    for &i in &hull {
        let (p, q) = lines[i];
        if q < 0.0 {
            candidates.push((p - b_lo) / -q);
        }
    }
    let mut best: Option<(f64, f64, f64)> = None;
    for gamma in candidates {
        if !(gamma >= g_lo && gamma <= g_hi) {
            continue;
        }
        let beta = least_beta(gamma);
        if beta > b_hi {
            continue;
        }
        let budget = beta + gamma * d;
        if best.map_or(true, |(b, _, g)| budget < b || (budget == b && gamma < g)) {
            best = Some((budget, beta, gamma));
        }
    }
    best.map(|(_, beta, gamma)| (beta, gamma))
}
