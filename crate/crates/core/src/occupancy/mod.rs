//! Local occupancy certificates: exhaustive verification over neighbourhood
//! subgraphs, closed-form parameter choices, and a numeric parameter search.

mod closed_form;
mod search;

pub use closed_form::{
    clique_candidates, clique_params, clique_threshold, hall_params, mad_params, setting_params,
    triangle_free_params, CliqueCandidates, CliqueParams, CliqueVariant, ClosedForm, VariantParams,
};
pub use search::{numeric_param_search, SearchConfig, SearchResult};

use crate::graph::{Graph, GraphError};
use crate::hardcore::{independence_polynomial, Fugacity, HardcoreError};
use crate::special::SpecialError;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

/// Default bound on `deg(u)` for induced enumeration.
pub const DEGREE_CAP: usize = 20;
/// Default bound on the edges of `G[N(u)]` for strong enumeration.
pub const STRONG_EDGE_CAP: usize = 25;
/// A certificate is accepted when every gap is at least `-VERIFY_TOLERANCE`.
pub const VERIFY_TOLERANCE: f64 = 1e-9;
/// Gaps this close to zero are recomputed in exact rational arithmetic.
pub const EXACT_BAND: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OccupancyError {
    #[error("vertex {vertex} has degree {degree}, above the enumeration cap {cap}")]
    DegreeCap { vertex: usize, degree: usize, cap: usize },
    #[error("neighbourhood of vertex {vertex} spans {edges} edges, above the strong-mode cap {cap}")]
    EdgeCap { vertex: usize, edges: usize, cap: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameter(String),
    #[error("parameters given for {given} vertices but the graph has {n}")]
    LengthMismatch { given: usize, n: usize },
    #[error("{0}")]
    Special(#[from] SpecialError),
    #[error("{0}")]
    Graph(#[from] GraphError),
    #[error("{0}")]
    Hardcore(#[from] HardcoreError),
    #[error("d = {d} is below the threshold d0 = {d0} used for these parameters")]
    BelowThreshold { d: f64, d0: f64 },
    #[error("no threshold d0 found up to {limit:e}")]
    NoThreshold { limit: f64 },
    #[error("parameter search failed at vertex {vertex}: {reason}")]
    SearchFailed { vertex: usize, reason: String },
}

/// Per-vertex `(β_u, γ_u)` together with the fugacity they certify.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OccupancyParams {
    lambda: Fugacity,
    pairs: Vec<(f64, f64)>,
    strong: bool,
}

impl OccupancyParams {
    pub fn uniform(n: usize, lambda: Fugacity, beta: f64, gamma: f64) -> Result<Self, OccupancyError> {
        Self::per_vertex(lambda, vec![(beta, gamma); n])
    }

    pub fn per_vertex(lambda: Fugacity, pairs: Vec<(f64, f64)>) -> Result<Self, OccupancyError> {
        if let Some((u, _)) = pairs.iter().enumerate().find(|(_, &(b, g))| !(b > 0.0 && g > 0.0 && b.is_finite() && g.is_finite())) {
            return Err(OccupancyError::InvalidParameter(format!("beta and gamma must be positive and finite (vertex {u})")));
        }
        Ok(OccupancyParams { lambda, pairs, strong: false })
    }

    /// Target all subgraphs of each neighbourhood rather than induced ones only.
    pub fn strong(mut self, strong: bool) -> Self {
        self.strong = strong;
        self
    }

    pub fn lambda(&self) -> Fugacity {
        self.lambda
    }

    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    pub fn is_strong(&self) -> bool {
        self.strong
    }

    /// `β_u + γ_u·d_u` for each vertex.
    pub fn budgets(&self, d: &[f64]) -> Vec<f64> {
        self.pairs.iter().zip(d).map(|(&(b, g), &d)| b + g * d).collect()
    }
}

/// A subgraph `F` of `G[N(u)]`, in host labels, attaining the minimum gap.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Witness {
    pub vertex: usize,
    pub subgraph_vertices: Vec<usize>,
    pub subgraph_edges: Vec<(usize, usize)>,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OccupancyReport {
    pub verified: bool,
    /// Minimum over `u` and `F` of the left-hand side minus 1.
    pub min_gap: f64,
    pub witness: Option<Witness>,
    pub subgraphs_checked: u64,
    pub exact_evaluations: u64,
    pub strong: bool,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub degree_cap: usize,
    pub edge_cap: usize,
    pub tolerance: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { degree_cap: DEGREE_CAP, edge_cap: STRONG_EDGE_CAP, tolerance: VERIFY_TOLERANCE }
    }
}

/// Checks `β_u·(λ/(1+λ))/Z_F + γ_u·λZ'_F/Z_F ≥ 1` for every vertex `u` and
/// every induced (or, in strong mode, every) subgraph `F` of `G[N(u)]`,
/// including the empty one.
pub fn verify_local_occupancy(g: &Graph, params: &OccupancyParams) -> Result<OccupancyReport, OccupancyError> {
    verify_local_occupancy_with(g, params, &VerifyConfig::default())
}

pub fn verify_local_occupancy_with(
    g: &Graph,
    params: &OccupancyParams,
    config: &VerifyConfig,
) -> Result<OccupancyReport, OccupancyError> {
    if params.pairs.len() != g.n() {
        return Err(OccupancyError::LengthMismatch { given: params.pairs.len(), n: g.n() });
    }
    for u in 0..g.n() {
        check_caps(g, u, params.strong, config)?;
    }
    let outcomes: Vec<VertexOutcome> = (0..g.n())
        .into_par_iter()
        .map(|u| {
            let (beta, gamma) = params.pairs[u];
            let table = NeighbourhoodTable::new(g, u, params.lambda);
            if params.strong {
                table.strong_scan(beta, gamma)
            } else {
                table.induced_scan(beta, gamma)
            }
        })
        .collect::<Result<_, _>>()?;

    let mut report = OccupancyReport {
        verified: true,
        min_gap: f64::INFINITY,
        witness: None,
        subgraphs_checked: 0,
        exact_evaluations: 0,
        strong: params.strong,
        tolerance: config.tolerance,
    };
    for o in outcomes {
        report.subgraphs_checked += o.checked;
        report.exact_evaluations += o.exact;
        if o.witness.gap < report.min_gap {
            report.min_gap = o.witness.gap;
            report.witness = Some(o.witness);
        }
    }
    report.verified = report.min_gap >= -config.tolerance;
    Ok(report)
}

fn check_caps(g: &Graph, u: usize, strong: bool, config: &VerifyConfig) -> Result<(), OccupancyError> {
    let degree = g.degree(u);
    if degree > config.degree_cap {
        return Err(OccupancyError::DegreeCap { vertex: u, degree, cap: config.degree_cap });
    }
    if strong {
        let edges = crate::graph::neighbourhood_edge_count(g, u);
        if edges > config.edge_cap {
            return Err(OccupancyError::EdgeCap { vertex: u, edges, cap: config.edge_cap });
        }
    }
    Ok(())
}

struct VertexOutcome {
    witness: Witness,
    checked: u64,
    exact: u64,
}

/// `(Z, λZ')` of every induced subgraph of one neighbourhood, indexed by bitmask
/// over `N(u)` in increasing vertex order.
pub(crate) struct NeighbourhoodTable {
    vertex: usize,
    nbrs: Vec<usize>,
    adj: Vec<u32>,
    lambda: Fugacity,
    pub(crate) z: Vec<f64>,
    pub(crate) dz: Vec<f64>,
}

impl NeighbourhoodTable {
    pub(crate) fn new(g: &Graph, u: usize, lambda: Fugacity) -> Self {
        let nbrs = g.neighbours(u).to_vec();
        let d = nbrs.len();
        let adj: Vec<u32> = nbrs
            .iter()
            .map(|&v| (0..d).filter(|&j| g.has_edge(v, nbrs[j])).fold(0u32, |m, j| m | 1 << j))
            .collect();
        let lam = lambda.value();
        let size = 1usize << d;
        let mut z = vec![1.0; size];
        let mut dz = vec![0.0; size];
        for mask in 1..size {
            let v = mask.trailing_zeros() as usize;
            let rest = mask & !(1 << v);
            let out = rest & !(adj[v] as usize);
            z[mask] = z[rest] + lam * z[out];
            dz[mask] = dz[rest] + lam * (z[out] + dz[out]);
        }
        NeighbourhoodTable { vertex: u, nbrs, adj, lambda, z, dz }
    }

    #[cfg(test)]
    fn degree(&self) -> usize {
        self.nbrs.len()
    }

    fn host_vertices(&self, mask: usize) -> Vec<usize> {
        (0..self.nbrs.len()).filter(|&j| mask >> j & 1 == 1).map(|j| self.nbrs[j]).collect()
    }

    fn induced_edges(&self, mask: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.nbrs.len() {
            for j in i + 1..self.nbrs.len() {
                if mask >> i & 1 == 1 && mask >> j & 1 == 1 && self.adj[i] >> j & 1 == 1 {
                    out.push((self.nbrs[i], self.nbrs[j]));
                }
            }
        }
        out
    }

    fn induced_scan(&self, beta: f64, gamma: f64) -> Result<VertexOutcome, OccupancyError> {
        let c = self.lambda.ratio();
        let mut best = (f64::INFINITY, 0usize);
        let mut exact = 0;
        for mask in 0..self.z.len() {
            let mut gap = beta * c / self.z[mask] + gamma * self.dz[mask] / self.z[mask] - 1.0;
            if gap.abs() <= EXACT_BAND {
                let f = Graph::from_edges(self.nbrs.len(), self.local_edges(mask))?.induced_on(&bits(mask))?;
                gap = exact_gap(&f, beta, gamma, self.lambda)?;
                exact += 1;
            }
            if gap < best.0 {
                best = (gap, mask);
            }
        }
        let (gap, mask) = best;
        Ok(VertexOutcome {
            witness: Witness {
                vertex: self.vertex,
                subgraph_vertices: self.host_vertices(mask),
                subgraph_edges: self.induced_edges(mask),
                gap,
            },
            checked: self.z.len() as u64,
            exact,
        })
    }

    /// Edges of `G[N(u)]` in local labels.
    fn local_edges(&self, mask: usize) -> Vec<(usize, usize)> {
        let d = self.nbrs.len();
        let mut out = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                if mask >> i & 1 == 1 && mask >> j & 1 == 1 && self.adj[i] >> j & 1 == 1 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Visits `(edge subset, extra isolated count, Z, λZ')` for every subgraph of
    /// `G[N(u)]`. A subgraph is an edge set `E'` plus some isolated vertices, so
    /// it suffices to enumerate edge subsets and the number of extra isolated vertices.
    pub(crate) fn visit_subgraphs(&self, mut visit: impl FnMut(u64, usize, f64, f64)) {
        let d = self.nbrs.len();
        let edges = self.local_edges((1 << d) - 1);
        let lam = self.lambda.value();
        let c = self.lambda.ratio();
        let mut adj = vec![0u32; d];
        for subset in 0..1u64 << edges.len() {
            adj.iter_mut().for_each(|a| *a = 0);
            let mut touched = 0u32;
            for (i, &(a, b)) in edges.iter().enumerate() {
                if subset >> i & 1 == 1 {
                    adj[a] |= 1 << b;
                    adj[b] |= 1 << a;
                    touched |= 1 << a | 1 << b;
                }
            }
            let (z, dz) = pair_on_mask(touched, &adj, lam);
            let free = d - touched.count_ones() as usize;
            for k in 0..=free {
                let grow = (1.0 + lam).powi(k as i32);
                // λ d/dλ of Z·(1+λ)^k, divided through by the same factor.
                visit(subset, k, z * grow, (dz / z + k as f64 * c) * z * grow);
            }
        }
    }

    fn strong_scan(&self, beta: f64, gamma: f64) -> Result<VertexOutcome, OccupancyError> {
        let edges = self.local_edges((1 << self.nbrs.len()) - 1);
        let c = self.lambda.ratio();
        let mut best = (f64::INFINITY, 0u64, 0usize);
        let mut checked = 0u64;
        let mut exact = 0;
        let mut failure = None;
        self.visit_subgraphs(|subset, k, z, dz| {
            checked += 1;
            let mut gap = beta * c / z + gamma * dz / z - 1.0;
            if gap.abs() <= EXACT_BAND && failure.is_none() {
                let f = self.strong_subgraph(&edges, subset, k);
                match exact_gap(&f, beta, gamma, self.lambda) {
                    Ok(x) => gap = x,
                    Err(e) => failure = Some(e),
                }
                exact += 1;
            }
            if gap < best.0 {
                best = (gap, subset, k);
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        let (gap, subset, k) = best;
        let (verts, es) = self.strong_witness(&edges, subset, k);
        Ok(VertexOutcome {
            witness: Witness { vertex: self.vertex, subgraph_vertices: verts, subgraph_edges: es, gap },
            checked,
            exact,
        })
    }

    fn strong_parts(&self, edges: &[(usize, usize)], subset: u64, isolated: usize) -> (Vec<usize>, Vec<(usize, usize)>) {
        let chosen: Vec<(usize, usize)> =
            edges.iter().enumerate().filter(|(i, _)| subset >> i & 1 == 1).map(|(_, &e)| e).collect();
        let touched = chosen.iter().fold(0usize, |m, &(a, b)| m | 1 << a | 1 << b);
        let extra = (0..self.nbrs.len()).filter(|&j| touched >> j & 1 == 0).take(isolated).fold(0usize, |m, j| m | 1 << j);
        (bits(touched | extra), chosen)
    }

    fn strong_subgraph(&self, edges: &[(usize, usize)], subset: u64, isolated: usize) -> Graph {
        let (verts, chosen) = self.strong_parts(edges, subset, isolated);
        let index = |v: usize| verts.iter().position(|&w| w == v).expect("endpoint kept");
        Graph::from_edges(verts.len(), chosen.iter().map(|&(a, b)| (index(a), index(b)))).expect("valid subgraph")
    }

    fn strong_witness(&self, edges: &[(usize, usize)], subset: u64, isolated: usize) -> (Vec<usize>, Vec<(usize, usize)>) {
        let (verts, chosen) = self.strong_parts(edges, subset, isolated);
        (verts.iter().map(|&j| self.nbrs[j]).collect(), chosen.iter().map(|&(a, b)| (self.nbrs[a], self.nbrs[b])).collect())
    }
}

fn bits(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize).filter(|&j| mask >> j & 1 == 1).collect()
}

/// `(Z, λZ')` of the graph on the vertex set `mask` with adjacency masks `adj`.
fn pair_on_mask(mask: u32, adj: &[u32], lam: f64) -> (f64, f64) {
    if mask == 0 {
        return (1.0, 0.0);
    }
    let v = mask.trailing_zeros() as usize;
    let rest = mask & !(1 << v);
    let nb = adj[v] & mask;
    let (a, da) = pair_on_mask(rest, adj, lam);
    if nb == 0 {
        // Isolated vertex: multiply by (1 + λ).
        return (a * (1.0 + lam), da * (1.0 + lam) + a * lam);
    }
    let (b, db) = pair_on_mask(rest & !nb, adj, lam);
    (a + lam * b, da + lam * (b + db))
}

/// The gap for one `F` in exact arithmetic at the exact values of the doubles.
fn exact_gap(f: &Graph, beta: f64, gamma: f64, lambda: Fugacity) -> Result<f64, OccupancyError> {
    let p = independence_polynomial(f)?;
    let lam = lambda.to_rational();
    let z = p.evaluate_exact(&lam);
    let dz = p.lambda_derivative_exact(&lam);
    let b = BigRational::from_float(beta).expect("finite");
    let g = BigRational::from_float(gamma).expect("finite");
    let c = &lam / (BigRational::one() + &lam);
    let gap = (b * c + g * dz) / z - BigRational::one();
    Ok(gap.to_f64().unwrap_or(f64::NAN))
}

/// Uniform parameters from a closed form evaluated at `d = Δ`.
pub fn uniform_from(g: &Graph, lambda: Fugacity, form: &ClosedForm) -> Result<OccupancyParams, OccupancyError> {
    OccupancyParams::uniform(g.n(), lambda, form.beta, form.gamma)
}

/// Per-vertex parameters from the bounded-mad closed form with `a_u` the exact
/// `mad(G[N(u)])` (0 for empty neighbourhoods) and `d_u` as given.
pub fn params_from_local_mad(g: &Graph, lambda: Fugacity, d: &[f64]) -> Result<OccupancyParams, OccupancyError> {
    if d.len() != g.n() {
        return Err(OccupancyError::LengthMismatch { given: d.len(), n: g.n() });
    }
    let mut pairs = Vec::with_capacity(g.n());
    for u in 0..g.n() {
        let f = g.neighbourhood_graph(u)?;
        let a = if f.n() == 0 { 0.0 } else { crate::graph::max_average_degree(&f)?.to_f64().unwrap_or(0.0) };
        let form = mad_params(a, d[u], lambda)?;
        pairs.push((form.beta, form.gamma));
    }
    OccupancyParams::per_vertex(lambda, pairs)
}
