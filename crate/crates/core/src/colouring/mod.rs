//! Correspondence colouring: covers, the two-phase colouring procedure, the
//! greedy fractional colouring and the splitting reduction.

pub mod analysis;
mod cover;
mod fractional;
mod phases;
mod split;

use crate::graph::GraphError;
use crate::hardcore::HardcoreError;
use serde::Serialize;
use thiserror::Error;

pub use cover::{cover_from_lists, random_cover, random_cover_with, verify_colouring, Cover, CoverJson, Residual};
pub use fractional::{default_step, fractional_greedy, FractionalColouring, FractionalPart};
pub use phases::{
    colour, finishing_audit, phase1_partial, phase2_finish, ColourConfig, ColouringCertificate, FinishingFactor,
    PartialColouring, Phase1Stats, PhaseStats, Violation, ViolationKind,
};
pub use split::{iterated_split, next_degree, next_span, split_depth, split_partition, Bipartition, SplitAudit, SplitResult};

/// The stage of a run that produced a failure report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Phase {
    Partial,
    Finish,
    Fractional,
    Split,
}

/// A bounded run that gave up; not an error in the input.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailureReport {
    pub phase: Phase,
    pub vertex: Option<usize>,
    pub reason: String,
    pub rounds: u64,
    pub trace: Vec<Violation>,
}

#[derive(Debug, Error)]
pub enum ColouringError {
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("vertex {vertex} has an empty residual list")]
    EmptyResidualList { vertex: usize },
    #[error("{:?} phase failed after {} rounds: {}", .0.phase, .0.rounds, .0.reason)]
    Failure(FailureReport),
    #[error("finishing precondition fails at vertex {vertex}: {reason}")]
    Precondition { vertex: usize, reason: String },
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Hardcore(#[from] HardcoreError),
}
