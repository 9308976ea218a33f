//! Hard-core model machinery for colouring locally sparse graphs: exact
//! partition functions and sampling, local occupancy certificates, closed-form
//! parameters and bound formulas, and a two-phase correspondence colouring
//! procedure.

pub mod bitset;
pub mod bounds;
pub mod colouring;
pub mod graph;
pub mod hardcore;
pub mod occupancy;
pub mod special;

pub use bitset::VertexSet;
pub use bounds::{BoundResult, SparsitySetting};
pub use colouring::{Cover, FractionalColouring, PartialColouring, SplitResult};
pub use graph::{Graph, GraphError};
pub use hardcore::{Fugacity, HardCoreSample, IndependencePolynomial};
pub use occupancy::{OccupancyParams, OccupancyReport};

/// The random number generator used throughout; ChaCha8 keeps seeded streams
/// stable across platforms and releases.
pub type SeededRng = rand_chacha::ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    use rand::SeedableRng;
    SeededRng::seed_from_u64(seed)
}
