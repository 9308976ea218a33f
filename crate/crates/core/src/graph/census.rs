//! Isomorphism classes of small graphs.
//!
//! The canonical form of a graph on at most 11 vertices is the largest
//! upper-triangle adjacency bitstring over all vertex orders that respect an
//! equitable colour refinement seeded by degree.

use super::{Graph, GraphError};
use std::collections::HashSet;

const MAX_CANONICAL_N: usize = 11;

fn pair_index(i: usize, j: usize) -> usize {
    debug_assert!(i < j);
    j * (j - 1) / 2 + i
}

/// Canonical code of `g`: isomorphic graphs (and only they) share a code.
pub fn canonical_form(g: &Graph) -> Result<u64, GraphError> {
    let n = g.n();
    if n > MAX_CANONICAL_N {
        return Err(GraphError::CapExceeded { what: "canonical form", n, cap: MAX_CANONICAL_N });
    }
    let cells = refine(g);
    let total = n * n.saturating_sub(1) / 2;
    let mut search = Search { g, total, best: None, order: Vec::with_capacity(n), used: vec![false; n] };
    search.run(&cells, 0);
    Ok(search.best.unwrap_or(0))
}

/// Ordered cells of the coarsest equitable partition refining the degree partition.
fn refine(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut colour: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    loop {
        let signatures: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut s: Vec<usize> = g.neighbours(v).iter().map(|&w| colour[w]).collect();
                s.sort_unstable();
                (colour[v], s)
            })
            .collect();
        let mut distinct: Vec<&(usize, Vec<usize>)> = signatures.iter().collect();
        distinct.sort();
        distinct.dedup();
        let next: Vec<usize> = signatures.iter().map(|s| distinct.binary_search(&s).unwrap()).collect();
        let before = colour.iter().collect::<HashSet<_>>().len();
        colour = next;
        if distinct.len() == before {
            break;
        }
    }
    let classes = colour.iter().max().map_or(0, |&m| m + 1);
    let mut cells = vec![Vec::new(); classes];
    for v in 0..n {
        cells[colour[v]].push(v);
    }
    cells
}

struct Search<'a> {
    g: &'a Graph,
    total: usize,
    best: Option<u64>,
    order: Vec<usize>,
    used: Vec<bool>,
}

impl Search<'_> {
    /// Bits contributed by placing the last vertex of `order`, shifted into position.
    fn column_bits(&self) -> u64 {
        let j = self.order.len() - 1;
        let v = self.order[j];
        let mut bits = 0;
        for (i, &w) in self.order[..j].iter().enumerate() {
            if self.g.has_edge(v, w) {
                bits |= 1u64 << (self.total - 1 - pair_index(i, j));
            }
        }
        bits
    }

    fn prefix_mask(&self, placed: usize) -> u64 {
        let known = placed * placed.saturating_sub(1) / 2;
        if known == 0 {
            0
        } else {
            ((1u128 << known) - 1) as u64 * (1u64 << (self.total - known))
        }
    }

    fn run(&mut self, cells: &[Vec<usize>], acc: u64) {
        let placed = self.order.len();
        if placed == self.g.n() {
            if self.best.map_or(true, |b| acc > b) {
                self.best = Some(acc);
            }
            return;
        }
        let mut offset = 0;
        let cell = cells
            .iter()
            .find(|c| {
                offset += c.len();
                offset > placed
            })
            .unwrap();
        for &v in cell {
            if self.used[v] {
                continue;
            }
            self.used[v] = true;
            self.order.push(v);
            let next = acc | self.column_bits();
            let mask = self.prefix_mask(placed + 1);
            if self.best.map_or(true, |b| next & mask >= b & mask) {
                self.run(cells, next);
            }
            self.order.pop();
            self.used[v] = false;
        }
    }
}

/// Rebuilds a graph on `n` vertices from its canonical code.
pub fn from_canonical(n: usize, code: u64) -> Graph {
    let total = n * n.saturating_sub(1) / 2;
    let mut edges = Vec::new();
    for j in 1..n {
        for i in 0..j {
            if code >> (total - 1 - pair_index(i, j)) & 1 == 1 {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, edges).expect("valid code")
}

/// One representative of each isomorphism class of graphs on exactly `n` vertices.
pub fn graphs_on(n: usize) -> Result<Vec<Graph>, GraphError> {
    if n > 9 {
        return Err(GraphError::CapExceeded { what: "graph census", n, cap: 9 });
    }
    let mut layer = vec![Graph::edgeless(0)];
    for size in 1..=n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for g in &layer {
            let old = g.edge_list();
            for mask in 0u32..(1 << (size - 1)) {
                let mut edges = old.clone();
                edges.extend((0..size - 1).filter(|&v| mask >> v & 1 == 1).map(|v| (v, size - 1)));
                let h = Graph::from_edges(size, edges)?;
                let code = canonical_form(&h)?;
                if seen.insert(code) {
                    next.push(from_canonical(size, code));
                }
            }
        }
        layer = next;
    }
    Ok(layer)
}

/// Representatives of all isomorphism classes on `1..=n` vertices.
pub fn all_graphs_up_to(n: usize) -> Result<Vec<Graph>, GraphError> {
    let mut out = Vec::new();
    for size in 1..=n {
        out.extend(graphs_on(size)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle, path, petersen};

    #[test]
    fn class_counts_match_known_sequence() {
        let counts: Vec<usize> = (1..=6).map(|n| graphs_on(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 11, 34, 156]);
    }

    #[test]
    fn relabelling_preserves_code() {
        let g = cycle(6).unwrap();
        let h = Graph::from_edges(6, [(0, 2), (2, 4), (4, 1), (1, 3), (3, 5), (5, 0)]).unwrap();
        assert_eq!(canonical_form(&g).unwrap(), canonical_form(&h).unwrap());
        assert_ne!(canonical_form(&g).unwrap(), canonical_form(&path(6)).unwrap());
    }

    #[test]
    fn code_round_trips_up_to_isomorphism() {
        let p = petersen();
        let code = canonical_form(&p).unwrap();
        assert_eq!(canonical_form(&from_canonical(10, code)).unwrap(), code);
    }
}
