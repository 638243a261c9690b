//! Enumeration of assumption sets for the `n = 10, k = 6` case.
//!
//! A [`Configuration`] is an assumption set `U`, an excluded set `C` and a
//! forbidden family. The search adds vertices from an ordered list `M1` to
//! `U` and, at every leaf, asks whether the trimmed vertex set around the
//! grown `U` is 11-colorable. Leaves that are not are collected for
//! separate treatment.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use log::info;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::coloring::{greedy_colorable, is_colorable, ColoringOutcome, SatSolver};
use crate::configs::{ForbiddenFamily, NamedConfig, CONFIG_DIM};
use crate::cube::{distance, VertexSet};
use crate::error::{Error, Result};
use crate::graph::{trim2, BitGraph, DistanceGraph};

pub const SEARCH_K: u8 = 6;
pub const DEFAULT_COLORS: usize = 11;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    assumptions: VertexSet,
    excluded: VertexSet,
    forbidden: ForbiddenFamily,
    k: u8,
}

impl Configuration {
    pub fn new(
        assumptions: VertexSet,
        excluded: VertexSet,
        forbidden: ForbiddenFamily,
        k: u8,
    ) -> Result<Self> {
        assumptions.same_dim(&excluded)?;
        if assumptions
            .masks()
            .iter()
            .any(|&u| excluded.contains_mask(u))
        {
            return Err(Error::Invariant(
                "assumptions and excluded sets overlap".into(),
            ));
        }
        if assumptions.diameter() > u32::from(k) {
            return Err(Error::Invariant(format!("assumption diameter exceeds {k}")));
        }
        if forbidden.embeds_in(&assumptions)? {
            return Err(Error::Invariant(
                "assumptions contain a forbidden pattern".into(),
            ));
        }
        Ok(Configuration {
            assumptions,
            excluded,
            forbidden,
            k,
        })
    }

    pub fn assumptions(&self) -> &VertexSet {
        &self.assumptions
    }

    pub fn excluded(&self) -> &VertexSet {
        &self.excluded
    }

    pub fn forbidden(&self) -> &ForbiddenFamily {
        &self.forbidden
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    /// `U + v`, unchecked; callers go through [`can_add_restricted`].
    pub fn with_vertex(&self, v: u16) -> Configuration {
        Configuration {
            assumptions: self.assumptions.with_mask(v),
            ..self.clone()
        }
    }
}

/// `Trim2(cube \ C, k, U, F)`.
pub fn candidate_set(cfg: &Configuration) -> Result<VertexSet> {
    let domain = VertexSet::cube(cfg.assumptions.dim() as usize)?.difference(&cfg.excluded)?;
    trim2(&domain, cfg.k, &cfg.assumptions, &cfg.forbidden)
}

pub fn can_add_restricted(cfg: &Configuration, v: u16) -> Result<bool> {
    let u = &cfg.assumptions;
    if u.contains_mask(v) || cfg.excluded.contains_mask(v) {
        return Ok(false);
    }
    if u.masks().iter().any(|&x| distance(x, v) > u32::from(cfg.k)) {
        return Ok(false);
    }
    Ok(!cfg.forbidden.completes(u, v)?)
}

/// Candidates at distance 6 from the origin, most assumption points at
/// distance 6 first, ties by ascending mask; the first `limit` are kept.
pub fn order_m1(candidates: &VertexSet, assumptions: &VertexSet, limit: Option<usize>) -> Vec<u16> {
    let six = u32::from(SEARCH_K);
    let mut v6: Vec<(usize, u16)> = candidates
        .masks()
        .iter()
        .copied()
        .filter(|&v| v.count_ones() == six)
        .map(|v| {
            (
                assumptions
                    .masks()
                    .iter()
                    .filter(|&&a| distance(a, v) == six)
                    .count(),
                v,
            )
        })
        .collect();
    v6.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let take = limit.unwrap_or(v6.len()).min(v6.len());
    v6.into_iter().take(take).map(|(_, v)| v).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NotColoredEntry {
    pub assumptions: Vec<String>,
    pub outcome: String,
}

/// What happens at a leaf.
#[derive(Clone, Copy, Debug)]
pub enum LeafMode<'a> {
    /// Visit leaves without coloring them.
    Count,
    Color {
        colors: usize,
        timeout: Duration,
        solver: Option<&'a SatSolver>,
        greedy_only: bool,
    },
}

/// Per-branch leaf accounting. Stops accepting leaves once `cap` is reached.
pub struct LeafSink<'a> {
    mode: LeafMode<'a>,
    cap: Option<u64>,
    pub leaves: u64,
    pub colored: u64,
    pub unsat: u64,
    pub timed_out: u64,
    pub not_colored: Vec<NotColoredEntry>,
    /// Added vertices of each leaf, in visit order.
    pub trace: Vec<Vec<u16>>,
    record_trace: bool,
    hasher: Sha256,
}

impl<'a> LeafSink<'a> {
    pub fn new(mode: LeafMode<'a>, cap: Option<u64>) -> Self {
        LeafSink {
            mode,
            cap,
            leaves: 0,
            colored: 0,
            unsat: 0,
            timed_out: 0,
            not_colored: Vec::new(),
            trace: Vec::new(),
            record_trace: false,
            hasher: Sha256::new(),
        }
    }

    pub fn recording(mut self) -> Self {
        self.record_trace = true;
        self
    }

    fn full(&self) -> bool {
        self.cap.is_some_and(|c| self.leaves >= c)
    }

    fn leaf(&mut self, cfg: &Configuration, pool: &VertexSet) -> Result<()> {
        let u = &cfg.assumptions;
        if u.diameter() > u32::from(cfg.k) {
            return Err(Error::Invariant(format!(
                "leaf {:?} has diameter > {}",
                u.to_bitstrings(),
                cfg.k
            )));
        }
        if cfg.forbidden.embeds_in(u)? {
            return Err(Error::Invariant(format!(
                "leaf {:?} holds a forbidden pattern",
                u.to_bitstrings()
            )));
        }
        self.leaves += 1;
        for &m in u.masks() {
            self.hasher.update(m.to_le_bytes());
        }
        self.hasher.update([0xff, 0xff]);
        if self.record_trace {
            self.trace.push(u.masks().to_vec());
        }
        let LeafMode::Color {
            colors,
            timeout,
            solver,
            greedy_only,
        } = self.mode
        else {
            return Ok(());
        };
        let vertices = parity_class(&trim2(&pool.union(u)?, cfg.k, u, &cfg.forbidden)?, u, cfg.k);
        let graph = leaf_graph(u, &vertices, cfg.k, &cfg.forbidden)?;
        let outcome = if greedy_only {
            greedy_colorable(&graph, colors)
        } else {
            is_colorable(&graph, colors, timeout, solver)?
        };
        match outcome {
            ColoringOutcome::Colored(_) => self.colored += 1,
            ColoringOutcome::UnsatProven => self.unsat += 1,
            ColoringOutcome::TimedOut => self.timed_out += 1,
        }
        if !outcome.is_colored() {
            self.not_colored.push(NotColoredEntry {
                assumptions: u.to_bitstrings(),
                outcome: outcome.label().to_string(),
            });
        }
        Ok(())
    }

    pub fn digest(&self) -> String {
        hex::encode(self.hasher.clone().finalize())
    }
}

/// For even `k`, the vertices at even distance from `u`.
///
/// Distance-`k` edges never join the two parity classes, and the odd part
/// of any diameter-`k` set, translated by a unit vector, is itself an even
/// diameter-`k` set handled by the same case split. Coloring the class of
/// `u` is therefore enough.
pub fn parity_class(vertices: &VertexSet, u: &VertexSet, k: u8) -> VertexSet {
    let Some(&anchor) = u.masks().first() else {
        return vertices.clone();
    };
    if k % 2 == 1 {
        return vertices.clone();
    }
    VertexSet::from_masks_unchecked(
        vertices.dim(),
        vertices
            .masks()
            .iter()
            .copied()
            .filter(|&v| distance(v, anchor).is_multiple_of(2)),
    )
}

/// Distance-`k` graph on `vertices`, minus every edge whose two endpoints
/// would together complete a forbidden pattern over `u`: no admissible set
/// holds both, so they may share a color.
pub fn leaf_graph(
    u: &VertexSet,
    vertices: &VertexSet,
    k: u8,
    forbidden: &ForbiddenFamily,
) -> Result<BitGraph> {
    let dg = DistanceGraph::build(vertices, k)?;
    let mut g = dg.graph().clone();
    if forbidden.is_empty() {
        return Ok(g);
    }
    let pts = vertices.masks();
    for (a, b) in dg.graph().edges() {
        let (va, vb) = (pts[a], pts[b]);
        if u.contains_mask(va) || u.contains_mask(vb) {
            continue;
        }
        if forbidden.completes_pair(u, va, vb)? {
            g.remove_edge(a, b);
        }
    }
    Ok(g)
}

/// One iteration of the enumeration loop: try `set_to_check[i]`.
fn step(
    cfg: &Configuration,
    set_to_check: &[u16],
    i: usize,
    rest: &VertexSet,
    remaining: usize,
    limited: bool,
    sink: &mut LeafSink<'_>,
) -> Result<()> {
    let v = set_to_check[i];
    if sink.full() || !can_add_restricted(cfg, v)? {
        return Ok(());
    }
    let updated = cfg.with_vertex(v);
    if remaining > 0 {
        walk(
            &updated,
            &set_to_check[i..],
            rest,
            remaining - 1,
            limited,
            sink,
        )
    } else {
        let pool = if limited {
            rest.clone()
        } else {
            rest.union(&VertexSet::from_masks_unchecked(
                rest.dim(),
                set_to_check[i + 1..].iter().copied(),
            ))?
        };
        sink.leaf(&updated, &pool)
    }
}

fn walk(
    cfg: &Configuration,
    set_to_check: &[u16],
    rest: &VertexSet,
    remaining: usize,
    limited: bool,
    sink: &mut LeafSink<'_>,
) -> Result<()> {
    for i in 0..set_to_check.len() {
        if sink.full() {
            break;
        }
        step(cfg, set_to_check, i, rest, remaining, limited, sink)?;
    }
    Ok(())
}

/// Adds `remaining + 1` vertices from `set_to_check` (in order); each leaf
/// is colored on `U ∪ rest ∪ set_to_check[after last chosen..]`.
pub fn brute_force_restrictions(
    cfg: &Configuration,
    set_to_check: &[u16],
    rest: &VertexSet,
    remaining: usize,
    sink: &mut LeafSink<'_>,
) -> Result<()> {
    walk(cfg, set_to_check, rest, remaining, false, sink)
}

/// Same traversal, but leaves are colored on `U ∪ rest` only: the
/// configurations holding exactly `remaining + 1` vertices of `M1`.
pub fn brute_force_restrictions_limited(
    cfg: &Configuration,
    set_to_check: &[u16],
    rest: &VertexSet,
    remaining: usize,
    sink: &mut LeafSink<'_>,
) -> Result<()> {
    walk(cfg, set_to_check, rest, remaining, true, sink)
}

/// One row of the case table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseSpec {
    pub row: u8,
    pub assumptions: Vec<NamedConfig>,
    #[serde(default)]
    pub forbidden: Vec<NamedConfig>,
    /// `None` takes every distance-6 candidate.
    #[serde(default)]
    pub m1_limit: Option<usize>,
    pub depth: usize,
    #[serde(default = "default_colors")]
    pub colors: usize,
    #[serde(default = "default_timeout_ms")]
    pub timeout_ms: u64,
    #[serde(default)]
    pub leaf_budget: Option<u64>,
}

fn default_colors() -> usize {
    DEFAULT_COLORS
}

fn default_timeout_ms() -> u64 {
    1000
}

impl CaseSpec {
    pub fn table_row(row: u8) -> Result<CaseSpec> {
        use NamedConfig::*;
        let (assumptions, forbidden, m1_limit, depth) = match row {
            1 => (vec![K2], vec![K3], Some(0), 0),
            2 => (vec![K3], vec![K4Prime, K4DoublePrime], Some(80), 4),
            3 => (vec![K4DoublePrime], vec![K4Prime, K5], None, 3),
            4 => (
                vec![K4Prime],
                vec![K5MinusE(crate::configs::MissingEdge::Either)],
                Some(0),
                0,
            ),
            5 => (
                vec![K4Prime, K5MinusE(crate::configs::MissingEdge::Four)],
                vec![K5],
                Some(60),
                3,
            ),
            6 => (vec![K5], vec![K6], Some(60), 3),
            7 => (vec![K6PlusV246666], vec![], None, 4),
            8 => (vec![K6], vec![K6PlusV246666], None, 4),
            other => return Err(Error::UnknownRow(other)),
        };
        Ok(CaseSpec {
            row,
            assumptions,
            forbidden,
            m1_limit,
            depth,
            colors: DEFAULT_COLORS,
            timeout_ms: default_timeout_ms(),
            leaf_budget: None,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.assumptions.is_empty() {
            return Err(Error::InvalidCase("no assumptions".into()));
        }
        if self.colors == 0 {
            return Err(Error::InvalidCase("colors must be positive".into()));
        }
        Ok(())
    }

    pub fn initial_configuration(&self) -> Result<Configuration> {
        self.validate()?;
        let mut u = VertexSet::empty(CONFIG_DIM)?;
        for tag in &self.assumptions {
            u = u.union(&tag.representative())?;
        }
        Configuration::new(
            u,
            VertexSet::empty(CONFIG_DIM)?,
            ForbiddenFamily::named(self.forbidden.clone()),
            SEARCH_K,
        )
    }
}

/// A first-level unit of work.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Branch {
    /// No vertex from `M1` is added.
    Base,
    /// Exactly `j` vertices from `M1`, the first being `M1[i]`.
    Limited { j: usize, i: usize },
    /// At least `depth` vertices, the first being `M1[i]`.
    Full { depth: usize, i: usize },
}

impl Branch {
    fn key(self) -> String {
        match self {
            Branch::Base => "base".into(),
            Branch::Limited { j, i } => format!("L{j}:{i}"),
            Branch::Full { depth, i } => format!("R{depth}:{i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchResult {
    pub branch: String,
    pub leaves: u64,
    pub colored: u64,
    pub unsat: u64,
    pub timed_out: u64,
    pub not_colored: Vec<NotColoredEntry>,
    pub digest: String,
}

/// Everything the runner needs besides the spec.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub solver: Option<SatSolver>,
    pub greedy_only: bool,
    pub jobs: usize,
    pub checkpoint: Option<PathBuf>,
    pub resume: bool,
    pub count_only: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub row: u8,
    pub leaves: u64,
    pub colored: u64,
    pub timed_out: u64,
    pub unsat: u64,
    pub not_colored: Vec<Vec<String>>,
    pub not_colored_outcomes: Vec<String>,
    pub elapsed_s: f64,
    pub truncated: bool,
    pub leaf_budget: Option<u64>,
    pub candidates: usize,
    pub m1: Vec<String>,
    pub branches: usize,
    pub resumed_branches: usize,
    /// SHA-256 over the per-branch leaf digests in branch order.
    pub leaf_digest: String,
}

impl CaseReport {
    /// Leaf accounting is consistent and every leaf was colored.
    pub fn passed(&self) -> bool {
        self.leaves == self.colored + self.not_colored.len() as u64 && self.not_colored.is_empty()
    }
}

struct Plan {
    cfg: Configuration,
    candidates: VertexSet,
    m1: Vec<u16>,
    rest: VertexSet,
    branches: Vec<Branch>,
}

fn plan(spec: &CaseSpec) -> Result<Plan> {
    let cfg = spec.initial_configuration()?;
    let candidates = candidate_set(&cfg)?;
    let pool = candidates.difference(cfg.assumptions())?;
    let m1 = order_m1(&pool, cfg.assumptions(), spec.m1_limit);
    let rest = candidates.difference(&VertexSet::from_masks_unchecked(
        candidates.dim(),
        m1.iter().copied(),
    ))?;
    let mut branches = vec![Branch::Base];
    for j in 1..spec.depth {
        branches.extend((0..m1.len()).map(|i| Branch::Limited { j, i }));
    }
    if spec.depth > 0 {
        branches.extend((0..m1.len()).map(|i| Branch::Full {
            depth: spec.depth,
            i,
        }));
    }
    Ok(Plan {
        cfg,
        candidates,
        m1,
        rest,
        branches,
    })
}

fn run_branch(plan: &Plan, spec: &CaseSpec, branch: Branch, sink: &mut LeafSink<'_>) -> Result<()> {
    match branch {
        Branch::Base => {
            let pool = if spec.depth == 0 {
                &plan.candidates
            } else {
                &plan.rest
            };
            if !sink.full() {
                sink.leaf(&plan.cfg, pool)?;
            }
            Ok(())
        }
        Branch::Limited { j, i } => step(&plan.cfg, &plan.m1, i, &plan.rest, j - 1, true, sink),
        Branch::Full { depth, i } => {
            step(&plan.cfg, &plan.m1, i, &plan.rest, depth - 1, false, sink)
        }
    }
}

fn read_checkpoint(path: &PathBuf) -> Result<BTreeMap<String, BranchResult>> {
    let mut done = BTreeMap::new();
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(done),
        Err(e) => return Err(e.into()),
    };
    for line in BufReader::new(file).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let r: BranchResult = serde_json::from_str(&line)?;
        done.insert(r.branch.clone(), r);
    }
    Ok(done)
}

/// Leaves per branch under the global budget, in sequential branch order.
fn budget_caps(plan: &Plan, spec: &CaseSpec, budget: Option<u64>) -> Result<Vec<Option<u64>>> {
    let Some(mut left) = budget else {
        return Ok(vec![None; plan.branches.len()]);
    };
    let mut caps = Vec::with_capacity(plan.branches.len());
    for &b in &plan.branches {
        if left == 0 {
            caps.push(Some(0));
            continue;
        }
        let mut counter = LeafSink::new(LeafMode::Count, Some(left));
        run_branch(plan, spec, b, &mut counter)?;
        caps.push(Some(counter.leaves));
        left -= counter.leaves;
    }
    Ok(caps)
}

/// Run one row of the case table.
///
/// Branches are independent and run on `options.jobs` workers; results are
/// merged in branch order, so counts and digests do not depend on the
/// worker count. With a leaf budget, exactly the first `budget` leaves of
/// the sequential order are visited.
pub fn run_case(spec: &CaseSpec, options: &RunOptions) -> Result<CaseReport> {
    let start = Instant::now();
    let plan = plan(spec)?;
    let caps = budget_caps(&plan, spec, spec.leaf_budget)?;
    let done = match (&options.checkpoint, options.resume) {
        (Some(p), true) => read_checkpoint(p)?,
        _ => BTreeMap::new(),
    };
    let writer = match &options.checkpoint {
        Some(p) => {
            let mut o = OpenOptions::new();
            o.create(true);
            if options.resume {
                o.append(true);
            } else {
                o.write(true).truncate(true);
            }
            Some(Mutex::new(o.open(p)?))
        }
        None => None,
    };
    let mode = if options.count_only {
        LeafMode::Count
    } else {
        LeafMode::Color {
            colors: spec.colors,
            timeout: Duration::from_millis(spec.timeout_ms),
            solver: options.solver.as_ref(),
            greedy_only: options.greedy_only,
        }
    };
    info!(
        "row {}: {} candidates, |M1| = {}, {} branches",
        spec.row,
        plan.candidates.len(),
        plan.m1.len(),
        plan.branches.len()
    );

    let work: Vec<(Branch, Option<u64>)> = plan.branches.iter().copied().zip(caps).collect();
    let run_one = |&(branch, cap): &(Branch, Option<u64>)| -> Result<BranchResult> {
        if let Some(prev) = done.get(&branch.key()) {
            return Ok(prev.clone());
        }
        let mut sink = LeafSink::new(mode, cap);
        if cap != Some(0) {
            run_branch(&plan, spec, branch, &mut sink)?;
        }
        let result = BranchResult {
            branch: branch.key(),
            leaves: sink.leaves,
            colored: sink.colored,
            unsat: sink.unsat,
            timed_out: sink.timed_out,
            digest: sink.digest(),
            not_colored: sink.not_colored,
        };
        if let Some(w) = &writer {
            let mut f = w.lock().expect("checkpoint lock");
            writeln!(f, "{}", serde_json::to_string(&result)?)?;
            f.flush()?;
        }
        Ok(result)
    };
    let jobs = options.jobs.max(1);
    let results: Vec<BranchResult> = if jobs == 1 {
        work.iter().map(run_one).collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::InvalidCase(format!("worker pool: {e}")))?;
        pool.install(|| work.par_iter().map(run_one).collect::<Result<_>>())?
    };

    let mut report = CaseReport {
        row: spec.row,
        leaves: 0,
        colored: 0,
        timed_out: 0,
        unsat: 0,
        not_colored: Vec::new(),
        not_colored_outcomes: Vec::new(),
        elapsed_s: 0.0,
        truncated: false,
        leaf_budget: spec.leaf_budget,
        candidates: plan.candidates.len(),
        m1: plan
            .m1
            .iter()
            .map(|&m| crate::cube::format_mask(m, CONFIG_DIM as u8))
            .collect(),
        branches: plan.branches.len(),
        resumed_branches: 0,
        leaf_digest: String::new(),
    };
    let mut hasher = Sha256::new();
    for r in &results {
        if done.contains_key(&r.branch) {
            report.resumed_branches += 1;
        }
        report.leaves += r.leaves;
        report.colored += r.colored;
        report.unsat += r.unsat;
        report.timed_out += r.timed_out;
        for e in &r.not_colored {
            report.not_colored.push(e.assumptions.clone());
            report.not_colored_outcomes.push(e.outcome.clone());
        }
        hasher.update(r.digest.as_bytes());
    }
    report.leaf_digest = hex::encode(hasher.finalize());
    if let Some(budget) = spec.leaf_budget {
        report.truncated = report.leaves >= budget && total_exceeds(&plan, spec, budget)?;
    }
    report.elapsed_s = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Does the full tree hold more than `budget` leaves?
fn total_exceeds(plan: &Plan, spec: &CaseSpec, budget: u64) -> Result<bool> {
    let mut counter = LeafSink::new(LeafMode::Count, Some(budget + 1));
    for &b in &plan.branches {
        run_branch(plan, spec, b, &mut counter)?;
        if counter.full() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Sequence of leaves (added assumption sets) in visit order, up to `cap`.
pub fn leaf_sequence(spec: &CaseSpec, cap: Option<u64>) -> Result<Vec<VertexSet>> {
    let plan = plan(spec)?;
    let mut sink = LeafSink::new(LeafMode::Count, cap).recording();
    for &b in &plan.branches {
        run_branch(&plan, spec, b, &mut sink)?;
    }
    Ok(sink
        .trace
        .into_iter()
        .map(|m| VertexSet::from_masks_unchecked(CONFIG_DIM as u8, m))
        .collect())
}

/// Candidate, `M1` and rest sets for a spec, without running anything.
pub fn case_layout(spec: &CaseSpec) -> Result<(Configuration, VertexSet, Vec<u16>, VertexSet)> {
    let p = plan(spec)?;
    Ok((p.cfg, p.candidates, p.m1, p.rest))
}
