use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::ColorAssignment;
use crate::error::{Error, Result};
use crate::graph::BitGraph;

/// A CNF formula over variables `1..=variable_count`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfFormula {
    pub variable_count: u32,
    pub clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new(variable_count: u32) -> Self {
        CnfFormula {
            variable_count,
            clauses: Vec::new(),
        }
    }

    pub fn add_clause(&mut self, clause: Vec<i32>) {
        debug_assert!(clause
            .iter()
            .all(|&l| l != 0 && l.unsigned_abs() <= self.variable_count));
        self.clauses.push(clause);
    }

    /// Standard DIMACS text: header, one clause per line terminated by `0`.
    pub fn to_dimacs(&self) -> String {
        self.to_dimacs_with_comments(&[])
    }

    pub fn to_dimacs_with_comments(&self, comments: &[&str]) -> String {
        let mut out = String::new();
        for c in comments {
            let _ = writeln!(out, "c {c}");
        }
        let _ = writeln!(out, "p cnf {} {}", self.variable_count, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                let _ = write!(out, "{lit} ");
            }
            out.push_str("0\n");
        }
        out
    }

    /// Every clause has a true literal under `model` (`model[i]` = variable `i + 1`).
    pub fn satisfied_by(&self, model: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter().any(|&l| {
                let val = model
                    .get(l.unsigned_abs() as usize - 1)
                    .copied()
                    .unwrap_or(false);
                if l > 0 {
                    val
                } else {
                    !val
                }
            })
        })
    }
}

pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: idx + 1,
            message,
        };
        if let Some(rest) = line.strip_prefix("p cnf") {
            let nums: Vec<&str> = rest.split_whitespace().collect();
            if nums.len() != 2 {
                return Err(err(format!("bad header {line:?}")));
            }
            let vars = nums[0]
                .parse()
                .map_err(|_| err(format!("bad header {line:?}")))?;
            let count = nums[1]
                .parse()
                .map_err(|_| err(format!("bad header {line:?}")))?;
            header = Some((vars, count));
            continue;
        }
        for tok in line.split_whitespace() {
            let lit: i32 = tok
                .parse()
                .map_err(|_| err(format!("bad literal {tok:?}")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(lit);
            }
        }
    }
    let (variable_count, count) = header.ok_or(Error::Parse {
        line: 0,
        message: "missing p cnf header".into(),
    })?;
    if !current.is_empty() || clauses.len() != count {
        return Err(Error::Parse {
            line: 0,
            message: format!("header announces {count} clauses, found {}", clauses.len()),
        });
    }
    Ok(CnfFormula {
        variable_count,
        clauses,
    })
}

#[inline]
fn var(vertex: usize, color: usize, colors: usize) -> i32 {
    (vertex * colors + color + 1) as i32
}

/// A maximal clique grown greedily by degree, lowest index on ties.
pub fn greedy_clique(g: &BitGraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut clique = Vec::new();
    let mut cands: Vec<usize> = (0..n).collect();
    while let Some(&best) = cands
        .iter()
        .max_by_key(|&&v| (g.degree(v), std::cmp::Reverse(v)))
    {
        clique.push(best);
        cands.retain(|&v| v != best && g.has_edge(best, v));
    }
    clique
}

/// Clauses: one at-least-one-color clause per vertex, one conflict clause
/// per edge and color, and unit clauses pinning a greedy clique to distinct
/// colors. At-most-one clauses are left out: any held color of a
/// multi-colored vertex gives a proper coloring.
pub fn encode_coloring(g: &BitGraph, colors: usize) -> CnfFormula {
    assert!(colors >= 1, "at least one color");
    let n = g.vertex_count();
    let mut f = CnfFormula::new((n * colors) as u32);
    for v in 0..n {
        f.add_clause((0..colors).map(|i| var(v, i, colors)).collect());
    }
    for (a, b) in g.edges() {
        for i in 0..colors {
            f.add_clause(vec![-var(a, i, colors), -var(b, i, colors)]);
        }
    }
    for (i, &v) in greedy_clique(g).iter().take(colors).enumerate() {
        f.add_clause(vec![var(v, i, colors)]);
    }
    f
}

/// First true color of each vertex.
pub fn decode_coloring(vertices: usize, colors: usize, model: &[bool]) -> Result<ColorAssignment> {
    let mut out = Vec::with_capacity(vertices);
    for v in 0..vertices {
        let c = (0..colors)
            .find(|&i| {
                model
                    .get(var(v, i, colors) as usize - 1)
                    .copied()
                    .unwrap_or(false)
            })
            .ok_or_else(|| Error::SolverProtocol(format!("model leaves vertex {v} uncolored")))?;
        out.push(c as u32);
    }
    Ok(ColorAssignment::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force satisfiability for tiny formulas.
    fn brute_sat(f: &CnfFormula) -> bool {
        let n = f.variable_count as usize;
        (0..1u64 << n).any(|bits| {
            let model: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
            f.satisfied_by(&model)
        })
    }

    #[test]
    fn empty_formula_dimacs() {
        assert_eq!(CnfFormula::default().to_dimacs(), "p cnf 0 0\n");
    }

    #[test]
    fn single_clause_dimacs() {
        let mut f = CnfFormula::new(2);
        f.add_clause(vec![1, -2]);
        assert_eq!(f.to_dimacs(), "p cnf 2 1\n1 -2 0\n");
        assert_eq!(
            f.to_dimacs_with_comments(&["hi"]),
            "c hi\np cnf 2 1\n1 -2 0\n"
        );
    }

    #[test]
    fn dimacs_round_trip() {
        let f = encode_coloring(&BitGraph::complete(3), 3);
        assert_eq!(parse_dimacs(&f.to_dimacs()).unwrap(), f);
    }

    #[test]
    fn parse_rejects_count_mismatch() {
        assert!(parse_dimacs("p cnf 2 2\n1 0\n").is_err());
        assert!(parse_dimacs("1 2 0\n").is_err());
    }

    #[test]
    fn encoding_examples() {
        let single = encode_coloring(&BitGraph::new(1), 1);
        assert_eq!(single.variable_count, 1);
        assert!(brute_sat(&single));
        let edge = encode_coloring(&BitGraph::complete(2), 1);
        assert!(!brute_sat(&edge));
        assert!(!brute_sat(&encode_coloring(&BitGraph::complete(3), 2)));
        assert!(brute_sat(&encode_coloring(&BitGraph::complete(3), 3)));
    }

    #[test]
    fn greedy_clique_is_a_clique() {
        let g = BitGraph::from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)]);
        let c = greedy_clique(&g);
        assert_eq!(c.len(), 3);
        for (i, &a) in c.iter().enumerate() {
            for &b in &c[i + 1..] {
                assert!(g.has_edge(a, b));
            }
        }
    }
}
