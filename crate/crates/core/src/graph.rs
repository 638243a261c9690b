//! Distance graphs `G(V; k)` and the trimming operators.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::coloring::ColorAssignment;
use crate::configs::ForbiddenFamily;
use crate::cube::{distance, format_mask, Vertex, VertexSet};
use crate::error::{Error, Result};

/// Undirected simple graph on `0..n` with bitset rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitGraph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl BitGraph {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitGraph {
            n,
            words,
            rows: vec![0; n * words],
        }
    }

    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Self {
        let mut g = BitGraph::new(n);
        for (a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        BitGraph::from_edges(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))))
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a < self.n && b < self.n, "edge ({a},{b}) out of range");
        if a == b {
            return;
        }
        self.rows[a * self.words + b / 64] |= 1 << (b % 64);
        self.rows[b * self.words + a / 64] |= 1 << (a % 64);
    }

    pub fn remove_edge(&mut self, a: usize, b: usize) {
        assert!(a < self.n && b < self.n, "edge ({a},{b}) out of range");
        self.rows[a * self.words + b / 64] &= !(1 << (b % 64));
        self.rows[b * self.words + a / 64] &= !(1 << (a % 64));
    }

    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.rows[a * self.words + b / 64] >> (b % 64) & 1 == 1
    }

    pub fn row(&self, a: usize) -> &[u64] {
        &self.rows[a * self.words..(a + 1) * self.words]
    }

    pub fn neighbors(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(a).iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(w * 64 + bit)
            })
        })
    }

    pub fn degree(&self, a: usize) -> usize {
        self.row(a).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|a| self.degree(a)).sum::<usize>() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |a| {
            self.neighbors(a)
                .filter(move |&b| b > a)
                .map(move |b| (a, b))
        })
    }
}

/// `G(V; k)`: vertices of `V`, edges between points at distance exactly `k`.
#[derive(Clone, Debug)]
pub struct DistanceGraph {
    k: u8,
    vertices: VertexSet,
    graph: BitGraph,
}

impl DistanceGraph {
    pub fn build(vertices: &VertexSet, k: u8) -> Result<Self> {
        let n = vertices.dim();
        if k == 0 || k > n {
            return Err(Error::DistanceOutOfRange { n, k });
        }
        let pts = vertices.masks();
        let mut graph = BitGraph::new(pts.len());
        for (i, &a) in pts.iter().enumerate() {
            for (j, &b) in pts.iter().enumerate().skip(i + 1) {
                if distance(a, b) == u32::from(k) {
                    graph.add_edge(i, j);
                }
            }
        }
        Ok(DistanceGraph {
            k,
            vertices: vertices.clone(),
            graph,
        })
    }

    /// `G_{n,k}` on the whole cube.
    pub fn full_cube(n: usize, k: u8) -> Result<Self> {
        DistanceGraph::build(&VertexSet::cube(n)?, k)
    }

    pub fn dim(&self) -> u8 {
        self.vertices.dim()
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn vertices(&self) -> &VertexSet {
        &self.vertices
    }

    pub fn graph(&self) -> &BitGraph {
        &self.graph
    }

    pub fn index_of(&self, v: Vertex) -> Option<usize> {
        if v.dim() != self.dim() {
            return None;
        }
        self.vertices.masks().binary_search(&v.bits()).ok()
    }

    /// Edge-list export with a `p hamming n k |V| |E|` header.
    pub fn to_edge_list(&self) -> String {
        let n = self.dim();
        let pts = self.vertices.masks();
        let mut out = format!(
            "p hamming {} {} {} {}\n",
            n,
            self.k,
            pts.len(),
            self.graph.edge_count()
        );
        for (a, b) in self.graph.edges() {
            let _ = writeln!(out, "{} {}", format_mask(pts[a], n), format_mask(pts[b], n));
        }
        out
    }
}

/// `Trim_{n,k}(S)`: points of the cube within distance `k` of every point of `S`.
pub fn trim(n: usize, k: u8, seeds: &VertexSet) -> Result<VertexSet> {
    if seeds.dim() as usize != n {
        return Err(Error::DimensionMismatch(n as u8, seeds.dim()));
    }
    let cube = VertexSet::cube(n)?;
    Ok(trim_within(&cube, k, seeds))
}

pub(crate) fn trim_within(domain: &VertexSet, k: u8, seeds: &VertexSet) -> VertexSet {
    let k = u32::from(k);
    let kept = domain
        .masks()
        .iter()
        .copied()
        .filter(|&v| seeds.masks().iter().all(|&s| distance(v, s) <= k));
    VertexSet::from_masks_unchecked(domain.dim(), kept)
}

/// `Trim2(V, k, S, F)`: the trim of `V` around `S`, minus every `v` for
/// which `S ∪ {v}` holds an isometric copy of a forbidden pattern.
///
/// Only single additions are screened; pairs of new vertices that jointly
/// complete a pattern are left in place.
pub fn trim2(
    domain: &VertexSet,
    k: u8,
    seeds: &VertexSet,
    forbidden: &ForbiddenFamily,
) -> Result<VertexSet> {
    domain.same_dim(seeds)?;
    let base = trim_within(domain, k, seeds);
    if forbidden.is_empty() {
        return Ok(base);
    }
    if forbidden.embeds_in(seeds)? {
        return VertexSet::empty(domain.dim() as usize);
    }
    let dim = domain.dim();
    let mut kept = Vec::with_capacity(base.len());
    for &v in base.masks() {
        if seeds.contains_mask(v) || !forbidden.completes(seeds, v)? {
            kept.push(v);
        }
    }
    Ok(VertexSet::from_masks_unchecked(dim, kept))
}

/// Two-coloring of `G_{n,k}` by weight parity, indexed by mask.
pub fn parity_bipartition(n: usize, k: u8) -> Result<ColorAssignment> {
    if k.is_multiple_of(2) {
        return Err(Error::EvenDistance(k));
    }
    let cube = VertexSet::cube(n)?;
    Ok(ColorAssignment::new(
        cube.masks().iter().map(|m| m.count_ones() % 2).collect(),
    ))
}

/// Connected components by breadth-first search, in order of first vertex.
pub fn connected_components(g: &DistanceGraph) -> Vec<VertexSet> {
    let n = g.graph.vertex_count();
    let pts = g.vertices.masks();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut members = Vec::new();
        while let Some(a) = queue.pop_front() {
            members.push(pts[a]);
            for b in g.graph.neighbors(a) {
                if !seen[b] {
                    seen[b] = true;
                    queue.push_back(b);
                }
            }
        }
        out.push(VertexSet::from_masks_unchecked(g.dim(), members));
    }
    out
}
