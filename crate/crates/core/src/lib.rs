//! Verification toolkit for size-limited multipartite state preparation.
//!
//! The crate certifies Schmidt ranks exactly over Gaussian integers, builds
//! the seven-gate `Z⊗Z`-phase target family and its fifteen-qubit graph-state
//! resource, enumerates bipartite resource distributions that fit per-party
//! dimension budgets, simulates preparation protocols with sequential qubit
//! sending, and checks the cut-product bound on complete-graph distributions.

pub mod bounds;
pub mod cli;
pub mod dynamic;
pub mod exact;
pub mod feasibility;
pub mod mbqc;
pub mod party;
pub mod report;
pub mod statevector;
pub mod target;

pub use party::{Party, QubitLabel};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate bipartition: one side is empty")]
    DegenerateBipartition,
    #[error("the zero vector has no Schmidt rank")]
    ZeroState,
    #[error("duplicate qubit label {0}")]
    DuplicateLabel(QubitLabel),
    #[error("qubit {0} is not present in the state")]
    MissingLabel(QubitLabel),
    #[error("exact mode supports α ∈ {{0, π/4}} only (got {0})")]
    InexactAngle(f64),
    #[error("exact backend cannot apply {0}")]
    ExactUnsupported(String),
    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("the rank condition applies to trees only")]
    NotATree,
    #[error("invalid layout: {0}")]
    InvalidLayout(String),
    #[error("{0}")]
    InvalidInput(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("step {step}: {msg}")]
    Protocol { step: usize, msg: String },
    #[error("step {step}: capacity of party {party} exceeded ({msg})")]
    Capacity { step: usize, party: Party, msg: String },
    #[error("search guard exceeded: {0}")]
    Guard(String),
    #[error("no valid schedule found: {0}")]
    ScheduleNotFound(String),
    #[error("branches disagree: {0}")]
    Nondeterministic(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
