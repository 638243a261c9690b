use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(u8, u8),

    #[error("dimension {0} out of range (1..=16)")]
    DimensionOutOfRange(usize),

    #[error("distance threshold k={k} out of range for n={n}")]
    DistanceOutOfRange { n: u8, k: u8 },

    #[error("k={0} is even; the parity bipartition needs an odd distance")]
    EvenDistance(u8),

    #[error("invalid vertex string {0:?}")]
    InvalidVertex(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("expected a 4-clique at distance {k}, found distances {distances:?}")]
    NotAClique { k: u8, distances: Vec<u32> },

    #[error("unknown configuration tag {0:?}")]
    UnknownTag(String),

    #[error("coloring covers {got} vertices, graph has {expected}")]
    PartialAssignment { got: usize, expected: usize },

    #[error("graph has {0} vertices; the exact oracle is limited to 14")]
    GraphTooLarge(usize),

    #[error("no SAT solver configured (pass --solver or set SAT_SOLVER)")]
    SolverNotConfigured,

    #[error("SAT solver {path:?} could not be launched: {source}")]
    SolverLaunch {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("SAT solver protocol error: {0}")]
    SolverProtocol(String),

    #[error("unknown case row {0} (expected 1-8)")]
    UnknownRow(u8),

    #[error("invalid case spec: {0}")]
    InvalidCase(String),

    #[error("search invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
