//! Structural parameters: maximum average degree, Hall ratio, clique number,
//! degeneracy and local path counts.

use super::flow::FlowNetwork;
use super::{Graph, GraphError};
use crate::bitset::VertexSet;
use num_rational::Ratio;

/// Default vertex cap for [`hall_ratio`].
pub const HALL_RATIO_CAP: usize = 24;

/// Exact max over non-empty subgraphs of `2|E(H)|/|V(H)|`.
///
/// Dinkelbach iteration on densities: each step solves
/// `max_S |E(S)| − g|S|` by a Goldberg min cut with capacities scaled by the
/// denominator of `g`, and moves to the density of the maximizer.
pub fn max_average_degree(g: &Graph) -> Result<Ratio<u64>, GraphError> {
    let n = g.n();
    if n == 0 {
        return Err(GraphError::EmptyGraph);
    }
    let m = g.edge_count();
    if m == 0 {
        return Ok(Ratio::from_integer(0));
    }
    let (mut e, mut v) = (m as u64, n as u64);
    loop {
        let density = Ratio::new(e, v);
        let (p, q) = (*density.numer() as i64, *density.denom() as i64);
        let (mi, s, t) = (m as i64, n, n + 1);
        let mut net = FlowNetwork::new(n + 2);
        for x in 0..n {
            net.add_arc(s, x, mi * q);
            net.add_arc(x, t, mi * q + 2 * p - g.degree(x) as i64 * q);
        }
        for (a, b) in g.edge_list() {
            net.add_arcs(a, b, q, q);
        }
        let cut = net.max_flow(s, t);
        // cut = m·q·n − 2q·max_S(|E(S)| − g|S|)
        if mi * q * n as i64 - cut <= 0 {
            return Ok(Ratio::new(2 * e, v));
        }
        let side = net.source_side(s);
        let members = VertexSet::from_indices(n, (0..n).filter(|&x| side[x]));
        let size = members.len() as u64;
        let inside = members.iter().map(|x| g.adjacency(x).intersection_len(&members)).sum::<usize>() as u64 / 2;
        debug_assert!(inside * v > e * size, "min cut must improve the density");
        e = inside;
        v = size;
    }
}

/// Hall ratio with the default cap of [`HALL_RATIO_CAP`] vertices.
pub fn hall_ratio(g: &Graph) -> Result<Ratio<u64>, GraphError> {
    hall_ratio_with_cap(g, HALL_RATIO_CAP)
}

/// Exact max over vertex subsets `S` of `|S|/α(G[S])`, by a subset dynamic
/// program over all `2^n` subsets.
pub fn hall_ratio_with_cap(g: &Graph, cap: usize) -> Result<Ratio<u64>, GraphError> {
    let n = g.n();
    if n == 0 {
        return Err(GraphError::EmptyGraph);
    }
    if n > cap || n > 30 {
        return Err(GraphError::CapExceeded { what: "hall ratio", n, cap: cap.min(30) });
    }
    let masks: Vec<u32> = (0..n).map(|v| g.adjacency(v).words()[0] as u32).collect();
    let mut alpha = vec![0u8; 1 << n];
    let (mut best_num, mut best_den) = (1u64, 1u64);
    for s in 1u32..(1u32 << n) {
        let v = s.trailing_zeros() as usize;
        let without = s & (s - 1);
        let a = alpha[without as usize].max(1 + alpha[(without & !masks[v]) as usize]);
        alpha[s as usize] = a;
        let size = s.count_ones() as u64;
        if size * best_den > best_num * a as u64 {
            best_num = size;
            best_den = a as u64;
        }
    }
    Ok(Ratio::new(best_num, best_den))
}

/// Maximum clique size by colour-bounded branch and bound.
pub fn clique_number(g: &Graph) -> usize {
    let mut best = 0;
    expand(g, 0, g.vertex_set(), &mut best);
    best
}

fn expand(g: &Graph, size: usize, mut candidates: VertexSet, best: &mut usize) {
    let (order, bounds) = colour_order(g, &candidates);
    for i in (0..order.len()).rev() {
        if size + bounds[i] <= *best {
            return;
        }
        let v = order[i];
        let next = candidates.intersection(g.adjacency(v));
        if next.is_empty() {
            *best = (*best).max(size + 1);
        } else {
            expand(g, size + 1, next, best);
        }
        candidates.remove(v);
    }
}

/// Greedy colouring of `candidates`; `bounds[i]` is the colour of `order[i]`.
fn colour_order(g: &Graph, candidates: &VertexSet) -> (Vec<usize>, Vec<usize>) {
    let mut uncoloured = candidates.clone();
    let (mut order, mut bounds) = (Vec::new(), Vec::new());
    let mut colour = 0;
    while !uncoloured.is_empty() {
        colour += 1;
        let mut q = uncoloured.clone();
        while let Some(v) = q.first() {
            q.remove(v);
            q.difference_with(g.adjacency(v));
            uncoloured.remove(v);
            order.push(v);
            bounds.push(colour);
        }
    }
    (order, bounds)
}

pub fn independence_number(g: &Graph) -> usize {
    clique_number(&g.complement())
}

/// Degeneracy via repeated removal of a minimum-degree vertex.
pub fn degeneracy(g: &Graph) -> usize {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut result = 0;
    for _ in 0..n {
        let v = (0..n).filter(|&v| !removed[v]).min_by_key(|&v| deg[v]).unwrap();
        result = result.max(deg[v]);
        removed[v] = true;
        for &w in g.neighbours(v) {
            if !removed[w] {
                deg[w] -= 1;
            }
        }
    }
    result
}

/// Number of edges of `G[N(u)]`, i.e. the number of triangles through `u`.
pub fn neighbourhood_edge_count(g: &Graph, u: usize) -> usize {
    let nu = g.adjacency(u);
    nu.iter().map(|v| g.adjacency(v).intersection_len(nu)).sum::<usize>() / 2
}

pub fn is_triangle_free(g: &Graph) -> bool {
    (0..g.n()).all(|u| neighbourhood_edge_count(g, u) == 0)
}

/// Number of unordered copies of the path on `k − 1` vertices inside `G[N(u)]`.
pub fn local_path_count(g: &Graph, u: usize, k: usize) -> Result<u128, GraphError> {
    if k < 3 {
        return Err(GraphError::InvalidParameter(format!("path parameter k = {k} must be at least 3")));
    }
    let h = g.neighbourhood_graph(u)?;
    let len = k - 1;
    if len > h.n() {
        return Ok(0);
    }
    let mut directed = 0u128;
    let mut visited = VertexSet::new(h.n());
    for start in 0..h.n() {
        visited.insert(start);
        directed += count_walks(&h, start, len - 1, &mut visited);
        visited.remove(start);
    }
    Ok(if len == 1 { directed } else { directed / 2 })
}

fn count_walks(h: &Graph, v: usize, remaining: usize, visited: &mut VertexSet) -> u128 {
    if remaining == 0 {
        return 1;
    }
    let mut total = 0;
    for &w in h.neighbours(v) {
        if !visited.contains(w) {
            visited.insert(w);
            total += count_walks(h, w, remaining - 1, visited);
            visited.remove(w);
        }
    }
    total
}
