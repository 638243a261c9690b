//! Deciding `c`-colorability of graphs: greedy upper bounds, CNF encoding
//! for an external SAT solver, and an exact oracle for tiny graphs.

mod cnf;
mod dsatur;
mod exact;
mod solver;

use std::time::Duration;

use serde::{Deserialize, Serialize};

pub use cnf::{decode_coloring, encode_coloring, greedy_clique, parse_dimacs, CnfFormula};
pub use dsatur::dsatur;
pub use exact::{exact_chromatic_small, EXACT_LIMIT};
pub use solver::{SatOutcome, SatSolver, SOLVER_ENV};

use crate::error::{Error, Result};
use crate::graph::BitGraph;

/// Per-call budget used by the search leaves.
pub const DEFAULT_TIMEOUT: Duration = Duration::from_millis(1000);

/// A color for every vertex, indexed like the graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorAssignment {
    colors: Vec<u32>,
}

impl ColorAssignment {
    pub fn new(colors: Vec<u32>) -> Self {
        ColorAssignment { colors }
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn color(&self, index: usize) -> Option<u32> {
        self.colors.get(index).copied()
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// Number of distinct colors in use.
    pub fn color_count(&self) -> usize {
        let mut seen: Vec<u32> = self.colors.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColoringOutcome {
    /// A proper coloring that has passed [`verify_coloring`].
    Colored(ColorAssignment),
    UnsatProven,
    /// Undecided within the budget. Callers choose how to treat it.
    TimedOut,
}

impl ColoringOutcome {
    pub fn is_colored(&self) -> bool {
        matches!(self, ColoringOutcome::Colored(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            ColoringOutcome::Colored(_) => "colored",
            ColoringOutcome::UnsatProven => "unsat",
            ColoringOutcome::TimedOut => "timed_out",
        }
    }
}

/// No edge is monochromatic.
pub fn verify_coloring(g: &BitGraph, a: &ColorAssignment) -> Result<bool> {
    if a.len() != g.vertex_count() {
        return Err(Error::PartialAssignment {
            got: a.len(),
            expected: g.vertex_count(),
        });
    }
    Ok(g.edges().all(|(x, y)| a.colors[x] != a.colors[y]))
}

/// Is `g` colorable with `colors` colors?
///
/// DSATUR is tried first; only when it needs more than `colors` colors is
/// the SAT solver consulted. Without a solver that case is an error.
pub fn is_colorable(
    g: &BitGraph,
    colors: usize,
    timeout: Duration,
    solver: Option<&SatSolver>,
) -> Result<ColoringOutcome> {
    let greedy = dsatur(g);
    if greedy.color_count() <= colors {
        debug_assert!(verify_coloring(g, &greedy)?);
        return Ok(ColoringOutcome::Colored(greedy));
    }
    let solver = solver.ok_or(Error::SolverNotConfigured)?;
    let formula = encode_coloring(g, colors);
    match solver.solve(&formula, timeout)? {
        SatOutcome::Sat(model) => {
            let a = decode_coloring(g.vertex_count(), colors, &model)?;
            if !verify_coloring(g, &a)? {
                return Err(Error::SolverProtocol(
                    "model decodes to an improper coloring".into(),
                ));
            }
            Ok(ColoringOutcome::Colored(a))
        }
        SatOutcome::Unsat => Ok(ColoringOutcome::UnsatProven),
        SatOutcome::TimedOut => Ok(ColoringOutcome::TimedOut),
    }
}

/// Greedy-only variant: `Colored` when DSATUR fits, otherwise undecided.
pub fn greedy_colorable(g: &BitGraph, colors: usize) -> ColoringOutcome {
    let greedy = dsatur(g);
    if greedy.color_count() <= colors {
        ColoringOutcome::Colored(greedy)
    } else {
        ColoringOutcome::TimedOut
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> BitGraph {
        BitGraph::complete(3)
    }

    #[test]
    fn verify_examples() {
        let g = triangle();
        assert!(verify_coloring(&g, &ColorAssignment::new(vec![0, 1, 2])).unwrap());
        assert!(!verify_coloring(&g, &ColorAssignment::new(vec![0, 0, 2])).unwrap());
        assert!(matches!(
            verify_coloring(&g, &ColorAssignment::new(vec![0, 1])),
            Err(Error::PartialAssignment {
                got: 2,
                expected: 3
            })
        ));
    }

    #[test]
    fn greedy_path_needs_no_solver() {
        let g = BitGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]);
        let out = is_colorable(&g, 2, DEFAULT_TIMEOUT, None).unwrap();
        match out {
            ColoringOutcome::Colored(a) => assert!(verify_coloring(&g, &a).unwrap()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn hard_case_without_solver_is_configuration_error() {
        let g = BitGraph::complete(12);
        assert!(matches!(
            is_colorable(&g, 11, DEFAULT_TIMEOUT, None),
            Err(Error::SolverNotConfigured)
        ));
        assert_eq!(greedy_colorable(&g, 11), ColoringOutcome::TimedOut);
    }
}
