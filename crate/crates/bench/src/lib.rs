//! Shared fixtures for the benchmarks under `benches/`.

use hcolour_core::graph::{random_regular, random_triangle_free, Graph};

/// A random `d`-regular graph on `n` vertices with a fixed seed.
pub fn regular(n: usize, d: usize) -> Graph {
    random_regular(n, d, 1).expect("regular fixture")
}

/// A random triangle-free graph with maximum degree at most `max_degree`.
pub fn triangle_free(n: usize, max_degree: usize) -> Graph {
    random_triangle_free(n, max_degree, 1)
}
