//! Distance graphs on the Boolean cube, their colorings, and the search and
//! covering machinery for partitioning diameter-`k` subsets of `{0,1}^n`
//! into `n + 1` parts of smaller diameter.

pub mod coloring;
pub mod configs;
pub mod cover;
pub mod cube;
pub mod error;
pub mod graph;
pub mod io;
pub mod iso;
pub mod search;

pub use coloring::{CnfFormula, ColorAssignment, ColoringOutcome, SatOutcome, SatSolver};
pub use configs::{ForbiddenFamily, MissingEdge, NamedConfig, Pattern};
pub use cover::{CoveringSystem, MembershipReport, VerificationVerdict};
pub use cube::{Isometry, Vertex, VertexSet};
pub use error::{Error, Result};
pub use graph::{BitGraph, DistanceGraph};
pub use search::{CaseReport, CaseSpec, Configuration, RunOptions};
