//! Covers (correspondence assignments) of a graph.

use super::ColouringError;
use crate::graph::Graph;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

/// A cover `(L, H)` of a base graph `G`: a conflict graph `H` whose vertex set
/// is partitioned into cliques `L(u)`, with cross edges forming a matching
/// between `L(u)` and `L(v)` for each edge `uv` of `G` and absent otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Cover {
    base: Graph,
    conflict: Graph,
    blocks: Vec<Vec<usize>>,
    owner: Vec<usize>,
    from_lists: bool,
}

/// Serialized form of a cover; `n` is the number of base vertices and
/// `conflictEdges` lists every edge of `H`, block edges included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CoverJson {
    pub n: usize,
    pub blocks: Vec<Vec<usize>>,
    pub conflict_edges: Vec<(usize, usize)>,
    pub from_lists: bool,
}

impl Cover {
    /// Assembles a cover from its parts and audits it.
    pub fn new(base: Graph, conflict: Graph, blocks: Vec<Vec<usize>>, from_lists: bool) -> Result<Cover, ColouringError> {
        if blocks.len() != base.n() {
            return Err(ColouringError::InvalidCover(format!("{} blocks for {} base vertices", blocks.len(), base.n())));
        }
        let mut owner = vec![usize::MAX; conflict.n()];
        for (u, block) in blocks.iter().enumerate() {
            for &x in block {
                if x >= conflict.n() {
                    return Err(ColouringError::InvalidCover(format!("colour {x} out of range")));
                }
                if owner[x] != usize::MAX {
                    return Err(ColouringError::InvalidCover(format!("colour {x} lies in two blocks")));
                }
                owner[x] = u;
            }
        }
        if let Some(x) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(ColouringError::InvalidCover(format!("colour {x} lies in no block")));
        }
        let cover = Cover { base, conflict, blocks, owner, from_lists };
        cover.audit()?;
        Ok(cover)
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn conflict(&self) -> &Graph {
        &self.conflict
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, u: usize) -> &[usize] {
        &self.blocks[u]
    }

    /// The base vertex whose block contains colour `x`.
    pub fn owner(&self, x: usize) -> usize {
        self.owner[x]
    }

    pub fn from_lists(&self) -> bool {
        self.from_lists
    }

    /// Neighbours of `x` in `H*`, i.e. across blocks.
    pub fn cross_neighbours(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        let o = self.owner[x];
        self.conflict.neighbours(x).iter().copied().filter(move |&y| self.owner[y] != o)
    }

    /// `deg*(x)`, the degree of `x` in `H*`.
    pub fn star_degree(&self, x: usize) -> usize {
        self.cross_neighbours(x).count()
    }

    /// Checks the block cliques, that cross edges follow base edges, and that
    /// each pair of adjacent blocks is joined by a matching.
    pub fn audit(&self) -> Result<(), ColouringError> {
        for (u, block) in self.blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(ColouringError::InvalidCover(format!("block of vertex {u} is empty")));
            }
            for (i, &x) in block.iter().enumerate() {
                if let Some(&y) = block[i + 1..].iter().find(|&&y| !self.conflict.has_edge(x, y)) {
                    return Err(ColouringError::InvalidCover(format!("block of vertex {u} misses edge {x}-{y}")));
                }
            }
        }
        for x in 0..self.conflict.n() {
            let mut seen = HashSet::new();
            for y in self.cross_neighbours(x) {
                let (u, v) = (self.owner[x], self.owner[y]);
                if !self.base.has_edge(u, v) {
                    return Err(ColouringError::InvalidCover(format!("cross edge {x}-{y} joins non-adjacent {u} and {v}")));
                }
                if !seen.insert(v) {
                    return Err(ColouringError::InvalidCover(format!("colour {x} has two neighbours in the block of {v}")));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> CoverJson {
        CoverJson {
            n: self.base.n(),
            blocks: self.blocks.clone(),
            conflict_edges: self.conflict.edge_list(),
            from_lists: self.from_lists,
        }
    }

    /// Rebuilds a cover of `base` from its serialized form, auditing it.
    pub fn from_json(base: Graph, json: &CoverJson) -> Result<Cover, ColouringError> {
        if json.n != base.n() {
            return Err(ColouringError::InvalidCover(format!("cover is for {} vertices, graph has {}", json.n, base.n())));
        }
        let size = json.blocks.iter().map(Vec::len).sum();
        let conflict = Graph::from_edges(size, json.conflict_edges.iter().copied())?;
        Cover::new(base, conflict, json.blocks.clone(), json.from_lists)
    }

    /// The cover `(L_I, H_I)` of `G − dom(I)` left after colouring with `I`.
    pub fn residual(&self, chosen: &[usize]) -> Result<Residual, ColouringError> {
        let mut removed = vec![false; self.conflict.n()];
        let mut coloured = vec![false; self.base.n()];
        for &x in chosen {
            removed[x] = true;
            coloured[self.owner[x]] = true;
            for &y in self.conflict.neighbours(x) {
                removed[y] = true;
            }
        }
        let vertex_map: Vec<usize> = (0..self.base.n()).filter(|&u| !coloured[u]).collect();
        let mut local = vec![usize::MAX; self.base.n()];
        for (i, &u) in vertex_map.iter().enumerate() {
            local[u] = i;
        }
        let mut colour_map = Vec::new();
        let mut colour_local = vec![usize::MAX; self.conflict.n()];
        let mut blocks = Vec::with_capacity(vertex_map.len());
        for &u in &vertex_map {
            let mut block = Vec::new();
            for &x in &self.blocks[u] {
                if !removed[x] {
                    colour_local[x] = colour_map.len();
                    block.push(colour_map.len());
                    colour_map.push(x);
                }
            }
            blocks.push(block);
        }
        let base_edges = self
            .base
            .edge_list()
            .into_iter()
            .filter(|&(u, v)| !coloured[u] && !coloured[v])
            .map(|(u, v)| (local[u], local[v]));
        let base = Graph::from_edges(vertex_map.len(), base_edges)?;
        let conflict_edges = self
            .conflict
            .edge_list()
            .into_iter()
            .filter(|&(x, y)| colour_local[x] != usize::MAX && colour_local[y] != usize::MAX)
            .map(|(x, y)| (colour_local[x], colour_local[y]));
        let conflict = Graph::from_edges(colour_map.len(), conflict_edges)?;
        // An uncoloured vertex may have lost its whole list; such a residual is
        // reported rather than rejected by the audit.
        if let Some(i) = blocks.iter().position(Vec::is_empty) {
            return Err(ColouringError::EmptyResidualList { vertex: vertex_map[i] });
        }
        let cover = Cover::new(base, conflict, blocks, self.from_lists)?;
        Ok(Residual { cover, vertex_map, colour_map })
    }
}

/// A residual cover with maps back to the original vertex and colour labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub cover: Cover,
    pub vertex_map: Vec<usize>,
    pub colour_map: Vec<usize>,
}

/// The cover of a list assignment: one colour node per `(u, c)` with
/// `c ∈ lists[u]`, joined to `(v, c)` for every edge `uv`.
pub fn cover_from_lists(g: &Graph, lists: &[Vec<u64>]) -> Result<Cover, ColouringError> {
    if lists.len() != g.n() {
        return Err(ColouringError::InvalidInput(format!("{} lists for {} vertices", lists.len(), g.n())));
    }
    let mut blocks = Vec::with_capacity(g.n());
    let mut label = Vec::new();
    for (u, list) in lists.iter().enumerate() {
        let distinct: HashSet<_> = list.iter().collect();
        if list.is_empty() || distinct.len() != list.len() {
            return Err(ColouringError::InvalidInput(format!("list of vertex {u} is empty or repeats a colour")));
        }
        blocks.push((label.len()..label.len() + list.len()).collect::<Vec<_>>());
        label.extend(list.iter().copied());
    }
    let mut edges = Vec::new();
    for block in &blocks {
        for (i, &x) in block.iter().enumerate() {
            edges.extend(block[i + 1..].iter().map(|&y| (x, y)));
        }
    }
    for (u, v) in g.edge_list() {
        for &x in &blocks[u] {
            edges.extend(blocks[v].iter().filter(|&&y| label[x] == label[y]).map(|&y| (x, y)));
        }
    }
    let conflict = Graph::from_edges(label.len(), edges)?;
    Cover::new(g.clone(), conflict, blocks, true)
}

/// A `k`-fold cover with a uniformly random perfect matching on every edge of `g`.
pub fn random_cover<R: Rng + ?Sized>(g: &Graph, k: usize, rng: &mut R) -> Result<Cover, ColouringError> {
    random_cover_with(g, k, 1.0, rng)
}

/// A `k`-fold cover where each edge of `g` gets a uniformly random perfect
/// matching whose edges are then kept independently with probability `keep`.
pub fn random_cover_with<R: Rng + ?Sized>(g: &Graph, k: usize, keep: f64, rng: &mut R) -> Result<Cover, ColouringError> {
    if k == 0 || !(0.0..=1.0).contains(&keep) {
        return Err(ColouringError::InvalidInput(format!("need k >= 1 and keep in [0, 1], got k = {k}, keep = {keep}")));
    }
    let blocks: Vec<Vec<usize>> = (0..g.n()).map(|u| (u * k..(u + 1) * k).collect()).collect();
    let mut edges = Vec::new();
    for block in &blocks {
        for (i, &x) in block.iter().enumerate() {
            edges.extend(block[i + 1..].iter().map(|&y| (x, y)));
        }
    }
    let mut perm: Vec<usize> = (0..k).collect();
    for (u, v) in g.edge_list() {
        perm.shuffle(rng);
        for (i, &j) in perm.iter().enumerate() {
            if keep >= 1.0 || rng.gen::<f64>() < keep {
                edges.push((u * k + i, v * k + j));
            }
        }
    }
    let conflict = Graph::from_edges(g.n() * k, edges)?;
    Cover::new(g.clone(), conflict, blocks, false)
}

/// True iff `chosen` is independent in `H` and meets every block exactly once.
pub fn verify_colouring(cover: &Cover, chosen: &[usize]) -> bool {
    let mut hits = vec![0usize; cover.base.n()];
    for (i, &x) in chosen.iter().enumerate() {
        if x >= cover.conflict.n() {
            return false;
        }
        hits[cover.owner[x]] += 1;
        if chosen[i + 1..].iter().any(|&y| y == x || cover.conflict.has_edge(x, y)) {
            return false;
        }
    }
    hits.iter().all(|&h| h == 1)
}
