//! Simple undirected graphs with bitset adjacency.

mod census;
mod flow;
mod generate;
mod io;
mod params;

pub use census::{all_graphs_up_to, canonical_form, from_canonical, graphs_on};
pub use generate::{
    blow_up, complete, complete_bipartite, cycle, empty, erdos_renyi, kneser, path, petersen,
    random_regular, random_triangle_free, star, GraphSpec,
};
pub use io::{parse_graph, write_graph};
pub use params::{
    clique_number, degeneracy, hall_ratio, hall_ratio_with_cap, independence_number,
    is_triangle_free, local_path_count, max_average_degree, neighbourhood_edge_count,
    HALL_RATIO_CAP,
};

use crate::bitset::VertexSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("empty graph")]
    EmptyGraph,
    #[error("{what}: {n} vertices exceeds cap {cap}; pass an explicit larger cap to override")]
    CapExceeded { what: &'static str, n: usize, cap: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameter(String),
}

/// A simple undirected graph on vertices `0..n`. Immutable after construction.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<VertexSet>,
    nbrs: Vec<Vec<usize>>,
    edges: usize,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph").field("n", &self.n()).field("edges", &self.edge_list()).finish()
    }
}

impl Graph {
    /// Builds a graph from an edge list; duplicate edges are merged.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Graph, GraphError> {
        let mut adj = vec![VertexSet::new(n); n];
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { vertex: u });
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        Ok(Graph::from_adjacency(adj))
    }

    fn from_adjacency(adj: Vec<VertexSet>) -> Graph {
        let nbrs: Vec<Vec<usize>> = adj.iter().map(|s| s.to_vec()).collect();
        let edges = nbrs.iter().map(Vec::len).sum::<usize>() / 2;
        Graph { adj, nbrs, edges }
    }

    pub fn edgeless(n: usize) -> Graph {
        Graph::from_adjacency(vec![VertexSet::new(n); n])
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.nbrs[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.nbrs.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.nbrs[v]
    }

    pub fn adjacency(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].contains(v)
    }

    /// Closed neighbourhood N[v].
    pub fn closed_neighbourhood(&self, v: usize) -> VertexSet {
        let mut s = self.adj[v].clone();
        s.insert(v);
        s
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    /// Edges `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edges);
        for u in 0..self.n() {
            for &v in &self.nbrs[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn is_independent(&self, s: &VertexSet) -> bool {
        s.iter().all(|v| !self.adj[v].intersects(s))
    }

    /// Induced subgraph on `s`, relabelled `0..|s|` in increasing vertex order.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<Graph, GraphError> {
        if let Some(bad) = s.iter().find(|&v| v >= self.n()) {
            return Err(GraphError::VertexOutOfRange { vertex: bad, n: self.n() });
        }
        let verts = s.to_vec();
        self.induced_on(&verts)
    }

    /// Induced subgraph on an explicit vertex list, relabelled in list order.
    pub fn induced_on(&self, verts: &[usize]) -> Result<Graph, GraphError> {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in verts.iter().enumerate() {
            if v >= self.n() {
                return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n() });
            }
            index[v] = i;
        }
        let mut adj = vec![VertexSet::new(verts.len()); verts.len()];
        for (i, &v) in verts.iter().enumerate() {
            for &w in &self.nbrs[v] {
                if index[w] != usize::MAX {
                    adj[i].insert(index[w]);
                }
            }
        }
        Ok(Graph::from_adjacency(adj))
    }

    /// The subgraph G[N(u)].
    pub fn neighbourhood_graph(&self, u: usize) -> Result<Graph, GraphError> {
        if u >= self.n() {
            return Err(GraphError::VertexOutOfRange { vertex: u, n: self.n() });
        }
        self.induced_on(&self.nbrs[u])
    }

    /// G − v, keeping the remaining vertices in order.
    pub fn remove_vertex(&self, v: usize) -> Graph {
        let mut s = self.vertex_set();
        s.remove(v);
        self.induced_on(&s.to_vec()).expect("in range")
    }

    /// Connected components of `G[s]`, each as a vertex set of the host graph.
    pub fn components_within(&self, s: &VertexSet) -> Vec<VertexSet> {
        let mut remaining = s.clone();
        let mut out = Vec::new();
        while let Some(start) = remaining.first() {
            let mut comp = VertexSet::new(self.n());
            comp.insert(start);
            let mut frontier = comp.clone();
            remaining.remove(start);
            while !frontier.is_empty() {
                let mut next = VertexSet::new(self.n());
                for v in frontier.iter() {
                    next.union_with(&self.adj[v]);
                }
                next.intersect_with(&remaining);
                remaining.difference_with(&next);
                comp.union_with(&next);
                frontier = next;
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components_within(&self.vertex_set()).len() == 1
    }

    pub fn complement(&self) -> Graph {
        let n = self.n();
        let adj = (0..n)
            .map(|v| {
                let mut s = VertexSet::full(n).difference(&self.adj[v]);
                s.remove(v);
                s
            })
            .collect();
        Graph::from_adjacency(adj)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_self_loops_and_range_errors() {
        assert_eq!(Graph::from_edges(2, [(1, 1)]), Err(GraphError::SelfLoop { vertex: 1 }));
        assert_eq!(
            Graph::from_edges(2, [(0, 2)]),
            Err(GraphError::VertexOutOfRange { vertex: 2, n: 2 })
        );
    }

    #[test]
    fn duplicate_edges_merge() {
        let g = Graph::from_edges(3, [(0, 1), (1, 0), (0, 1), (1, 2)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.edge_list(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn induced_subgraph_examples() {
        let c5 = cycle(5).unwrap();
        let p3 = c5.induced_subgraph(&VertexSet::from_indices(5, [0, 1, 2])).unwrap();
        assert_eq!(p3, path(3));
        let e = c5.induced_subgraph(&VertexSet::new(5)).unwrap();
        assert_eq!(e.n(), 0);
        let k4 = complete(4);
        assert_eq!(k4.induced_subgraph(&VertexSet::from_indices(4, [0, 1, 2])).unwrap(), complete(3));
        assert!(k4.induced_on(&[0, 7]).is_err());
    }

    #[test]
    fn neighbourhood_graph_examples() {
        assert_eq!(complete(4).neighbourhood_graph(0).unwrap(), complete(3));
        assert_eq!(cycle(5).unwrap().neighbourhood_graph(0).unwrap(), Graph::edgeless(2));
        let p = petersen();
        for v in 0..10 {
            assert_eq!(p.neighbourhood_graph(v).unwrap(), Graph::edgeless(3));
        }
        assert!(p.neighbourhood_graph(10).is_err());
    }

    #[test]
    fn components() {
        let g = Graph::from_edges(6, [(0, 1), (2, 3), (3, 4)]).unwrap();
        let comps = g.components_within(&g.vertex_set());
        let sizes: Vec<usize> = comps.iter().map(VertexSet::len).collect();
        assert_eq!(sizes, vec![2, 3, 1]);
        assert!(!g.is_connected());
    }

    #[test]
    fn complement_of_cycle5_is_cycle5() {
        let c = cycle(5).unwrap().complement();
        assert_eq!(c.edge_count(), 5);
        assert!((0..5).all(|v| c.degree(v) == 2));
    }
}
