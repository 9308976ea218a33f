//! Deterministic and seeded random graph families.

use super::{Graph, GraphError};
use crate::seeded_rng;
use rand::seq::SliceRandom;
use rand::Rng;
use std::fmt;
use std::str::FromStr;

const REGULAR_ATTEMPTS: usize = 100_000;
const KNESER_VERTEX_CAP: usize = 1 << 20;

pub fn empty(n: usize) -> Graph {
    Graph::edgeless(n)
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
}

pub fn cycle(n: usize) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::InvalidParameter(format!("cycle needs n ≥ 3, got {n}")));
    }
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
}

pub fn complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).expect("valid clique")
}

/// `K_{a,b}` with parts `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    Graph::from_edges(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)))).expect("valid")
}

/// The star `K_{1,k}` with centre 0.
pub fn star(k: usize) -> Graph {
    complete_bipartite(1, k)
}

/// Kneser graph on the `k`-subsets of `0..n` (in lexicographic order), adjacent when disjoint.
pub fn kneser(n: usize, k: usize) -> Result<Graph, GraphError> {
    if k == 0 || k > n || n > 63 {
        return Err(GraphError::InvalidParameter(format!("kneser needs 1 ≤ k ≤ n ≤ 63, got n={n}, k={k}")));
    }
    let mut subsets: Vec<u64> = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        subsets.push(current.iter().map(|&i| 1u64 << i).sum());
        if subsets.len() > KNESER_VERTEX_CAP {
            return Err(GraphError::CapExceeded { what: "kneser", n: subsets.len(), cap: KNESER_VERTEX_CAP });
        }
        let Some(i) = (0..k).rev().find(|&i| current[i] < n - k + i) else { break };
        current[i] += 1;
        for j in i + 1..k {
            current[j] = current[j - 1] + 1;
        }
    }
    let m = subsets.len();
    let edges = (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b)));
    Graph::from_edges(m, edges.filter(|&(a, b)| subsets[a] & subsets[b] == 0))
}

pub fn petersen() -> Graph {
    kneser(5, 2).expect("valid")
}

/// Uniform `d`-regular graph from the configuration model, rejecting pairings
/// with loops or repeated edges.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph, GraphError> {
    if (n * d) % 2 == 1 || (d >= n && n > 0 && d > 0) {
        return Err(GraphError::InvalidParameter(format!("no simple {d}-regular graph on {n} vertices")));
    }
    let mut rng = seeded_rng(seed);
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    'attempt: for _ in 0..REGULAR_ATTEMPTS {
        points.shuffle(&mut rng);
        let mut seen = std::collections::HashSet::new();
        for pair in points.chunks(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !seen.insert((u, v)) {
                continue 'attempt;
            }
        }
        return Graph::from_edges(n, seen);
    }
    Err(GraphError::InvalidParameter(format!(
        "configuration model rejected {REGULAR_ATTEMPTS} pairings for n={n}, d={d}"
    )))
}

/// `G(n, p)`: each pair, in lexicographic order, is an edge with probability `p`.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph, GraphError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GraphError::InvalidParameter(format!("edge probability {p} not in [0, 1]")));
    }
    let mut rng = seeded_rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Random maximal triangle-free graph with maximum degree at most `max_degree`:
/// pairs are visited in random order and kept when they close no triangle.
pub fn random_triangle_free(n: usize, max_degree: usize, seed: u64) -> Graph {
    let mut rng = seeded_rng(seed);
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    pairs.shuffle(&mut rng);
    let mut adj = vec![crate::bitset::VertexSet::new(n); n];
    let mut deg = vec![0; n];
    let mut edges = Vec::new();
    for (u, v) in pairs {
        if deg[u] < max_degree && deg[v] < max_degree && !adj[u].intersects(&adj[v]) {
            adj[u].insert(v);
            adj[v].insert(u);
            deg[u] += 1;
            deg[v] += 1;
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, edges).expect("valid")
}

/// Replaces each vertex by `s` independent copies; copies of adjacent vertices
/// are completely joined. Copy `i` of `v` has index `v·s + i`.
pub fn blow_up(g: &Graph, s: usize) -> Graph {
    let mut edges = Vec::new();
    for (u, v) in g.edge_list() {
        for i in 0..s {
            for j in 0..s {
                edges.push((u * s + i, v * s + j));
            }
        }
    }
    Graph::from_edges(g.n() * s, edges).expect("valid")
}

/// Textual generator description such as `kneser:5,2` or `blow-up:2:cycle:5`.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphSpec {
    Empty(usize),
    Path(usize),
    Cycle(usize),
    Complete(usize),
    Star(usize),
    CompleteBipartite(usize, usize),
    Kneser(usize, usize),
    Petersen,
    RandomRegular(usize, usize),
    ErdosRenyi(usize, f64),
    TriangleFree(usize, usize),
    BlowUp(usize, Box<GraphSpec>),
}

impl GraphSpec {
    /// Builds the graph; random families draw from `seed`.
    pub fn build(&self, seed: u64) -> Result<Graph, GraphError> {
        Ok(match self {
            GraphSpec::Empty(n) => empty(*n),
            GraphSpec::Path(n) => path(*n),
            GraphSpec::Cycle(n) => cycle(*n)?,
            GraphSpec::Complete(n) => complete(*n),
            GraphSpec::Star(k) => star(*k),
            GraphSpec::CompleteBipartite(a, b) => complete_bipartite(*a, *b),
            GraphSpec::Kneser(n, k) => kneser(*n, *k)?,
            GraphSpec::Petersen => petersen(),
            GraphSpec::RandomRegular(n, d) => random_regular(*n, *d, seed)?,
            GraphSpec::ErdosRenyi(n, p) => erdos_renyi(*n, *p, seed)?,
            GraphSpec::TriangleFree(n, d) => random_triangle_free(*n, *d, seed),
            GraphSpec::BlowUp(s, inner) => blow_up(&inner.build(seed)?, *s),
        })
    }

    pub fn is_random(&self) -> bool {
        match self {
            GraphSpec::RandomRegular(..) | GraphSpec::ErdosRenyi(..) | GraphSpec::TriangleFree(..) => true,
            GraphSpec::BlowUp(_, inner) => inner.is_random(),
            _ => false,
        }
    }
}

fn bad(spec: &str) -> GraphError {
    GraphError::InvalidParameter(format!("unrecognised generator spec '{spec}'"))
}

impl FromStr for GraphSpec {
    type Err = GraphError;

    fn from_str(spec: &str) -> Result<Self, GraphError> {
        let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
        if name == "blow-up" {
            let (s, inner) = rest.split_once(':').ok_or_else(|| bad(spec))?;
            let s = s.parse().map_err(|_| bad(spec))?;
            return Ok(GraphSpec::BlowUp(s, Box::new(inner.parse()?)));
        }
        let args: Vec<&str> = if rest.is_empty() { Vec::new() } else { rest.split(',').collect() };
        let ints = || -> Result<Vec<usize>, GraphError> {
            args.iter().map(|a| a.trim().parse::<usize>().map_err(|_| bad(spec))).collect()
        };
        let arity = |k: usize| -> Result<Vec<usize>, GraphError> {
            let v = ints()?;
            if v.len() == k {
                Ok(v)
            } else {
                Err(bad(spec))
            }
        };
        Ok(match name {
            "empty" => GraphSpec::Empty(arity(1)?[0]),
            "path" => GraphSpec::Path(arity(1)?[0]),
            "cycle" => GraphSpec::Cycle(arity(1)?[0]),
            "complete" => GraphSpec::Complete(arity(1)?[0]),
            "star" => GraphSpec::Star(arity(1)?[0]),
            "complete-bipartite" => {
                let v = arity(2)?;
                GraphSpec::CompleteBipartite(v[0], v[1])
            }
            "kneser" => {
                let v = arity(2)?;
                GraphSpec::Kneser(v[0], v[1])
            }
            "petersen" if args.is_empty() => GraphSpec::Petersen,
            "random-regular" => {
                let v = arity(2)?;
                GraphSpec::RandomRegular(v[0], v[1])
            }
            "triangle-free" => {
                let v = arity(2)?;
                GraphSpec::TriangleFree(v[0], v[1])
            }
            "erdos-renyi" => {
                if args.len() != 2 {
                    return Err(bad(spec));
                }
                let n = args[0].trim().parse().map_err(|_| bad(spec))?;
                let p = args[1].trim().parse().map_err(|_| bad(spec))?;
                GraphSpec::ErdosRenyi(n, p)
            }
            _ => return Err(bad(spec)),
        })
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Empty(n) => write!(f, "empty:{n}"),
            GraphSpec::Path(n) => write!(f, "path:{n}"),
            GraphSpec::Cycle(n) => write!(f, "cycle:{n}"),
            GraphSpec::Complete(n) => write!(f, "complete:{n}"),
            GraphSpec::Star(k) => write!(f, "star:{k}"),
            GraphSpec::CompleteBipartite(a, b) => write!(f, "complete-bipartite:{a},{b}"),
            GraphSpec::Kneser(n, k) => write!(f, "kneser:{n},{k}"),
            GraphSpec::Petersen => write!(f, "petersen"),
            GraphSpec::RandomRegular(n, d) => write!(f, "random-regular:{n},{d}"),
            GraphSpec::ErdosRenyi(n, p) => write!(f, "erdos-renyi:{n},{p}"),
            GraphSpec::TriangleFree(n, d) => write!(f, "triangle-free:{n},{d}"),
            GraphSpec::BlowUp(s, inner) => write!(f, "blow-up:{s}:{inner}"),
        }
    }
}
