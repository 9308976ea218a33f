//! Exact checks on the local law behind the first phase: fix `u` and an
//! independent set `J` of colours away from `N[u]`, and let `I'` be hard-core
//! on `H[L_J(N(u))]`. A colour `x ∈ L(u)` survives iff `I'` misses its layer
//! `Λ_x`, the cross neighbours of `x` in `L_J(N(u))`.

use super::{Cover, ColouringError};
use crate::graph::{graphs_on, Graph};
use crate::hardcore::engine::{PartitionEngine, RationalAlgebra};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

/// Largest `H[L_J(N(u))]` the exhaustive correlation check will enumerate.
pub const CORRELATION_NODE_CAP: usize = 24;

/// `H[L_J(N(u))]` with the layers of the colours of `u`.
#[derive(Debug, Clone)]
pub struct LocalLaw {
    /// The `H` nodes of `L_J(N(u))`, in increasing order.
    pub colours: Vec<usize>,
    pub graph: Graph,
    /// For each colour of `L(u)` in block order, its layer as local indices.
    pub layers: Vec<Vec<usize>>,
}

impl LocalLaw {
    pub fn new(cover: &Cover, u: usize, j: &[usize]) -> Result<LocalLaw, ColouringError> {
        let base = cover.base();
        if u >= base.n() {
            return Err(ColouringError::InvalidInput(format!("vertex {u} out of range")));
        }
        let h = cover.conflict();
        let closed = base.closed_neighbourhood(u);
        for (i, &x) in j.iter().enumerate() {
            if x >= h.n() || closed.contains(cover.owner(x)) {
                return Err(ColouringError::InvalidInput(format!("colour {x} of J is not outside L(N[u])")));
            }
            if j[i + 1..].iter().any(|&y| y == x || h.has_edge(x, y)) {
                return Err(ColouringError::InvalidInput("J is not independent in H".into()));
            }
        }
        let blocked = |x: usize| j.iter().any(|&y| h.has_edge(x, y));
        let colours: Vec<usize> =
            base.neighbours(u).iter().flat_map(|&v| cover.block(v).iter().copied()).filter(|&x| !blocked(x)).collect();
        let mut colours = colours;
        colours.sort_unstable();
        let mut local = vec![usize::MAX; h.n()];
        for (i, &x) in colours.iter().enumerate() {
            local[x] = i;
        }
        let graph = h.induced_on(&colours)?;
        let layers = cover
            .block(u)
            .iter()
            .map(|&x| cover.cross_neighbours(x).filter(|&y| local[y] != usize::MAX).map(|y| local[y]).collect())
            .collect();
        Ok(LocalLaw { colours, graph, layers })
    }
}

/// `E|L_I(u)|` exactly, as `Σ_x Z(H' − Λ_x)/Z(H')` over `x ∈ L(u)`.
pub fn expected_residual_list(cover: &Cover, u: usize, j: &[usize], lambda: &BigRational) -> Result<BigRational, ColouringError> {
    let law = LocalLaw::new(cover, u, j)?;
    let mut engine = PartitionEngine::new(&law.graph, RationalAlgebra { lambda: lambda.clone() });
    let z = engine.total()?;
    let mut total = BigRational::zero();
    for layer in &law.layers {
        let mut rest = law.graph.vertex_set();
        for &y in layer {
            rest.remove(y);
        }
        total += engine.partition(&rest)? / &z;
    }
    Ok(total)
}

/// `m_u = ((1+λ)/(β_u λ))(|L(u)| − γ_u deg(u))`.
pub fn expectation_target(beta: f64, gamma: f64, list_size: usize, degree: usize, lambda: f64) -> f64 {
    (1.0 + lambda) / (beta * lambda) * (list_size as f64 - gamma * degree as f64)
}

/// A subset `S ⊆ L(u)` whose colours are jointly unavailable more often than
/// independence allows. Probabilities are rounded for display; the comparison
/// itself is exact.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CorrelationViolation {
    pub vertex: usize,
    pub j: Vec<usize>,
    pub subset: Vec<usize>,
    pub joint: f64,
    pub product: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CorrelationCheck {
    pub instances: u64,
    pub subsets: u64,
    pub violations: Vec<CorrelationViolation>,
}

impl CorrelationCheck {
    pub fn merge(&mut self, other: CorrelationCheck) {
        self.instances += other.instances;
        self.subsets += other.subsets;
        self.violations.extend(other.violations);
    }
}

fn ratio_f64(num: &BigUint, den: &BigUint) -> f64 {
    let r = BigRational::new(num.clone().into(), den.clone().into());
    num_traits::ToPrimitive::to_f64(&r).unwrap_or(f64::NAN)
}

/// Checks `Pr(Y_x = 1 ∀x ∈ S) ≤ Π_{x∈S} Pr(Y_x = 1)` for every `S ⊆ L(u)`
/// with `|S| ≥ 2`, where `Y_x` says `x` is unavailable. The fugacity is the
/// fraction `num/den`, so every weight is an integer.
pub fn check_negative_correlation(
    cover: &Cover,
    u: usize,
    j: &[usize],
    num: u64,
    den: u64,
) -> Result<CorrelationCheck, ColouringError> {
    if num == 0 || den == 0 {
        return Err(ColouringError::InvalidInput("fugacity must be a positive fraction".into()));
    }
    let law = LocalLaw::new(cover, u, j)?;
    let m = law.graph.n();
    let k = law.layers.len();
    if m > CORRELATION_NODE_CAP || k > 16 {
        return Err(ColouringError::InvalidInput(format!("{m} local colours and {k} layers exceed the enumeration cap")));
    }
    let mut layer_of = vec![usize::MAX; m];
    for (i, layer) in law.layers.iter().enumerate() {
        for &y in layer {
            layer_of[y] = i;
        }
    }
    let adj: Vec<u32> = (0..m).map(|v| law.graph.neighbours(v).iter().fold(0u32, |a, &w| a | 1 << w)).collect();
    let pow = |b: u64, e: usize| BigUint::from(b).pow(e as u32);
    // Weight of each pattern of hit layers.
    let mut by_pattern = vec![BigUint::zero(); 1 << k];
    let mut stack = vec![(0usize, 0u32, 0usize, 0usize)];
    while let Some((v, forbidden, size, hit)) = stack.pop() {
        if v == m {
            by_pattern[hit] += pow(num, size) * pow(den, m - size);
            continue;
        }
        stack.push((v + 1, forbidden, size, hit));
        if forbidden & (1 << v) == 0 {
            let h = if layer_of[v] == usize::MAX { hit } else { hit | 1 << layer_of[v] };
            stack.push((v + 1, forbidden | adj[v], size + 1, h));
        }
    }
    // Superset sums: weight of "every layer in S is hit".
    let mut joint = by_pattern;
    for bit in 0..k {
        for s in 0..1usize << k {
            if s & (1 << bit) == 0 {
                let add = joint[s | 1 << bit].clone();
                joint[s] += add;
            }
        }
    }
    let z = joint[0].clone();
    let mut check = CorrelationCheck { instances: 1, ..Default::default() };
    for s in 1usize..1 << k {
        let size = s.count_ones() as usize;
        if size < 2 {
            continue;
        }
        check.subsets += 1;
        let lhs = &joint[s] * z.pow(size as u32 - 1);
        let rhs: BigUint = (0..k).filter(|&i| s & (1 << i) != 0).map(|i| joint[1 << i].clone()).product();
        if lhs > rhs {
            let block = cover.block(u);
            check.violations.push(CorrelationViolation {
                vertex: u,
                j: j.to_vec(),
                subset: (0..k).filter(|&i| s & (1 << i) != 0).map(|i| block[i]).collect(),
                joint: ratio_f64(&joint[s], &z),
                product: ratio_f64(&rhs, &z.pow(size as u32)),
            });
        }
    }
    Ok(check)
}

/// Every independent set of `H` on colours of vertices outside `N[u]`.
pub fn outside_independent_sets(cover: &Cover, u: usize) -> Vec<Vec<usize>> {
    let closed = cover.base().closed_neighbourhood(u);
    let outside: Vec<usize> = (0..cover.conflict().n()).filter(|&x| !closed.contains(cover.owner(x))).collect();
    let h = cover.conflict();
    let mut out = Vec::new();
    let mut stack = vec![(0usize, Vec::new())];
    while let Some((i, set)) = stack.pop() {
        if i == outside.len() {
            out.push(set);
            continue;
        }
        let x = outside[i];
        if set.iter().all(|&y| !h.has_edge(x, y)) {
            let mut with = set.clone();
            with.push(x);
            stack.push((i + 1, with));
        }
        stack.push((i + 1, set));
    }
    out
}

/// All partial matchings between two `k`-sets, as lists of pairs.
fn partial_matchings(k: usize, perfect_only: bool) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let mut stack = vec![(0usize, 0u32, Vec::new())];
    while let Some((i, used, pairs)) = stack.pop() {
        if i == k {
            if !perfect_only || pairs.len() == k {
                out.push(pairs);
            }
            continue;
        }
        if !perfect_only {
            stack.push((i + 1, used, pairs.clone()));
        }
        for j in 0..k {
            if used & (1 << j) == 0 {
                let mut p = pairs.clone();
                p.push((i, j));
                stack.push((i + 1, used | 1 << j, p));
            }
        }
    }
    out
}

/// The small-cover family for the exhaustive correlation check: every base
/// graph on `n` vertices up to isomorphism with a vertex `u` of positive
/// degree, every `k`-fold cover with `n·k ≤ max_colours` whose cross edges are
/// arbitrary partial matchings when `k ≤ 2` and perfect matchings when `k ≥ 3`.
/// Calls `visit(cover, u)` for each instance; `u` ranges over all vertices.
pub fn for_each_small_cover(max_vertices: usize, max_colours: usize, mut visit: impl FnMut(&Cover, usize)) {
    for n in 2..=max_vertices {
        let graphs = graphs_on(n).expect("small census");
        for g in graphs.iter().filter(|g| g.edge_count() > 0) {
            for k in 1..=max_colours / n {
                let matchings = partial_matchings(k, k >= 3);
                let edges = g.edge_list();
                let mut choice = vec![0usize; edges.len()];
                let block_edges: Vec<(usize, usize)> = (0..n)
                    .flat_map(|v| (0..k).flat_map(move |a| (a + 1..k).map(move |b| (v * k + a, v * k + b))))
                    .collect();
                let blocks: Vec<Vec<usize>> = (0..n).map(|v| (v * k..(v + 1) * k).collect()).collect();
                loop {
                    let mut h_edges = block_edges.clone();
                    for (e, &(a, b)) in edges.iter().enumerate() {
                        h_edges.extend(matchings[choice[e]].iter().map(|&(i, j)| (a * k + i, b * k + j)));
                    }
                    let h = Graph::from_edges(n * k, h_edges).expect("valid edges");
                    let cover = Cover::new(g.clone(), h, blocks.clone(), false).expect("family covers are valid");
                    for u in (0..n).filter(|&u| g.degree(u) > 0) {
                        visit(&cover, u);
                    }
                    // Odometer over per-edge matchings.
                    let mut e = 0;
                    while e < edges.len() {
                        choice[e] += 1;
                        if choice[e] < matchings.len() {
                            break;
                        }
                        choice[e] = 0;
                        e += 1;
                    }
                    if e == edges.len() {
                        break;
                    }
                }
            }
        }
    }
}

/// Runs the correlation check over [`for_each_small_cover`] and every `J`.
pub fn correlation_sweep(max_vertices: usize, max_colours: usize, num: u64, den: u64) -> Result<CorrelationCheck, ColouringError> {
    let mut total = CorrelationCheck::default();
    let mut error = None;
    for_each_small_cover(max_vertices, max_colours, |cover, u| {
        if error.is_some() {
            return;
        }
        for j in outside_independent_sets(cover, u) {
            match check_negative_correlation(cover, u, &j, num, den) {
                Ok(c) => total.merge(c),
                Err(e) => {
                    error = Some(e);
                    return;
                }
            }
        }
    });
    match error {
        Some(e) => Err(e),
        None => Ok(total),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::{cover_from_lists, random_cover};
    use crate::graph::{complete, path, star};
    use crate::seeded_rng;
    use num_bigint::BigInt;

    fn frac(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn star_centre_layers_are_independent() {
        // Leaves of a star with the same list: each colour of the centre is
        // blocked iff its leaf takes the matching colour.
        let g = star(2);
        let cover = cover_from_lists(&g, &[vec![1, 2], vec![1, 2], vec![1, 2]]).unwrap();
        let law = LocalLaw::new(&cover, 0, &[]).unwrap();
        assert_eq!(law.colours.len(), 4);
        assert_eq!(law.layers, vec![vec![0, 2], vec![1, 3]]);
        // Each leaf is a K2 block: Z = 1 + 2λ, Pr(leaf avoids x) = (1 + λ)/(1 + 2λ).
        let lam = frac(1, 1);
        let e = expected_residual_list(&cover, 0, &[], &lam).unwrap();
        assert_eq!(e, frac(2, 1) * frac(4, 9));
    }

    #[test]
    fn j_removes_blocked_colours() {
        let g = path(3);
        let cover = cover_from_lists(&g, &[vec![1, 2], vec![1, 2], vec![1, 2]]).unwrap();
        // Colour 4 is (vertex 2, colour 1); it blocks (vertex 1, colour 1).
        let law = LocalLaw::new(&cover, 0, &[4]).unwrap();
        assert_eq!(law.colours, vec![3]);
        assert!(LocalLaw::new(&cover, 0, &[2]).is_err());
    }

    #[test]
    fn expectation_meets_target_on_triangle_free_example() {
        let cover = cover_from_lists(&star(3), &[vec![1, 2, 3], vec![1, 2, 3], vec![1, 2, 3], vec![1, 2, 3]]).unwrap();
        let lam = 1.0;
        // Any (β, γ) with the local occupancy property on edgeless neighbourhoods.
        let (beta, gamma) = (2.0, 1.0);
        let exact = expected_residual_list(&cover, 0, &[], &frac(1, 1)).unwrap();
        let e = num_traits::ToPrimitive::to_f64(&exact).unwrap();
        assert!(e >= expectation_target(beta, gamma, 3, 3, lam));
    }

    #[test]
    fn single_neighbour_is_negatively_correlated() {
        let mut rng = seeded_rng(2);
        let cover = random_cover(&complete(2), 4, &mut rng).unwrap();
        let c = check_negative_correlation(&cover, 0, &[], 1, 1).unwrap();
        assert_eq!(c.subsets, 11);
        assert!(c.violations.is_empty());
    }

    #[test]
    fn matchings_are_counted() {
        assert_eq!(partial_matchings(2, false).len(), 7);
        assert_eq!(partial_matchings(3, false).len(), 34);
        assert_eq!(partial_matchings(3, true).len(), 6);
    }

    #[test]
    fn triangle_free_family_has_no_violations() {
        let mut total = CorrelationCheck::default();
        for_each_small_cover(4, 8, |cover, u| {
            if crate::graph::is_triangle_free(cover.base()) {
                for j in outside_independent_sets(cover, u) {
                    total.merge(check_negative_correlation(cover, u, &j, 1, 1).unwrap());
                }
            }
        });
        assert!(total.instances > 1000);
        assert!(total.violations.is_empty(), "{:?}", &total.violations[..1]);
    }

    #[test]
    fn twisted_triangle_cover_is_positively_correlated() {
        // u = 0 on a triangle; colour 0 of u sees a, colour 1 sees b, and the
        // v-w matching joins a to b' and a' to b, so choosing a favours b.
        let (a, a2, b, b2) = (2, 3, 4, 5);
        let h = Graph::from_edges(6, [(0, 1), (a, a2), (b, b2), (0, a), (1, b), (a, b2), (a2, b)]).unwrap();
        let cover = Cover::new(complete(3), h, vec![vec![0, 1], vec![a, a2], vec![b, b2]], false).unwrap();
        let c = check_negative_correlation(&cover, 0, &[], 1, 1).unwrap();
        assert_eq!(c.violations.len(), 1);
        assert_eq!(c.violations[0].joint, 1.0 / 7.0);
        assert_eq!(c.violations[0].product, 4.0 / 49.0);
    }
}

