//! Covering systems and the verification pipelines for small cases.
//!
//! A set `C` covers the `(n, k)` case when every maximal diameter-`k`
//! subset of the cube maps into `C` under some isometry. A family of such
//! sets is a covering system. If the distance-`k` graph of each member is
//! `(n + 1)`-colorable, every diameter-`k` subset splits into `n + 1` parts
//! of smaller diameter.

use std::time::{Duration, Instant};

use log::info;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coloring::{is_colorable, verify_coloring, ColoringOutcome, SatSolver};
use crate::cube::{distance, parse_mask, Isometry, VertexSet};
use crate::error::{Error, Result};
use crate::graph::{parity_bipartition, trim, DistanceGraph};

pub const U1: &str = "0000001111";
pub const U2: &str = "0000110011";
pub const V: [&str; 6] = [
    "0000010111",
    "0000100111",
    "0001000111",
    "0010000111",
    "0100000111",
    "1000000111",
];
pub const W: [&str; 3] = ["0000011011", "0000011101", "0000011110"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringSystem {
    pub dim: u8,
    pub k: u8,
    pub sets: Vec<VertexSet>,
    pub labels: Vec<String>,
}

impl CoveringSystem {
    pub fn new(dim: u8, k: u8, sets: Vec<VertexSet>, labels: Vec<String>) -> Result<Self> {
        if sets.len() != labels.len() {
            return Err(Error::InvalidCase("one label per set".into()));
        }
        if let Some(bad) = sets.iter().find(|s| s.dim() != dim) {
            return Err(Error::DimensionMismatch(dim, bad.dim()));
        }
        Ok(CoveringSystem {
            dim,
            k,
            sets,
            labels,
        })
    }
}

fn masks(strings: &[&str]) -> Vec<u16> {
    strings
        .iter()
        .map(|s| parse_mask(s).expect("literal bitstring"))
        .collect()
}

/// `Trim(n, k, {0, 1^k 0^(n-k)})`.
pub fn build_tnk2(n: usize, k: u8) -> Result<VertexSet> {
    if k == 0 || usize::from(k) > n {
        return Err(Error::DistanceOutOfRange { n: n as u8, k });
    }
    let u = (1u16 << k) - 1;
    trim(n, k, &VertexSet::from_masks(n, [0, u])?)
}

/// The three `(10, 4)` cover sets: `Trim(U1)`, `U2 ∪ W` and `U3 ∪ W`.
pub fn build_cover_10_4() -> Result<CoveringSystem> {
    let w = trim(10, 2, &VertexSet::from_masks(10, [0])?)?;
    let u1 = VertexSet::from_masks(10, [0].into_iter().chain(masks(&[U1, U2])))?;
    let u2 = VertexSet::from_masks(10, [0].into_iter().chain(masks(&[U1])).chain(masks(&V)))?;
    let u3 = VertexSet::from_masks(
        10,
        [0].into_iter().chain(masks(&[U1, V[0]])).chain(masks(&W)),
    )?;
    CoveringSystem::new(
        10,
        4,
        vec![trim(10, 4, &u1)?, u2.union(&w)?, u3.union(&w)?],
        vec!["Trim(U1)".into(), "U2+W".into(), "U3+W".into()],
    )
}

/// Outcome for one set of a verification run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SetVerdict {
    pub label: String,
    pub n: u8,
    pub k: u8,
    pub size: usize,
    pub colors: usize,
    pub outcome: String,
    pub colors_used: Option<usize>,
    /// `full-cube`, `cover` or `parity`.
    pub route: String,
    pub elapsed_s: f64,
}

impl SetVerdict {
    pub fn colored(&self) -> bool {
        self.outcome == "colored"
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationVerdict {
    pub sets: Vec<SetVerdict>,
    pub passed: bool,
}

impl VerificationVerdict {
    fn from_sets(sets: Vec<SetVerdict>) -> Self {
        let passed = sets.iter().all(SetVerdict::colored);
        VerificationVerdict { sets, passed }
    }
}

/// Colors `G(set; k)` with `colors` colors and re-checks any coloring found.
fn color_set(
    label: String,
    set: &VertexSet,
    k: u8,
    colors: usize,
    route: &str,
    timeout: Duration,
    solver: Option<&SatSolver>,
) -> Result<SetVerdict> {
    let start = Instant::now();
    let g = DistanceGraph::build(set, k)?;
    let outcome = is_colorable(g.graph(), colors, timeout, solver)?;
    let colors_used = match &outcome {
        ColoringOutcome::Colored(a) => {
            if !verify_coloring(g.graph(), a)? {
                return Err(Error::Invariant(format!(
                    "{label}: improper coloring returned"
                )));
            }
            Some(a.color_count())
        }
        _ => None,
    };
    info!("{label}: {} vertices, {}", set.len(), outcome.label());
    Ok(SetVerdict {
        label,
        n: set.dim(),
        k,
        size: set.len(),
        colors,
        outcome: outcome.label().to_string(),
        colors_used,
        route: route.to_string(),
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}

/// Each `(10, 4)` cover set is 11-colorable.
pub fn verify_prop8(timeout: Duration, solver: Option<&SatSolver>) -> Result<VerificationVerdict> {
    let system = build_cover_10_4()?;
    let sets = system
        .sets
        .par_iter()
        .zip(system.labels.par_iter())
        .map(|(s, l)| {
            color_set(
                l.clone(),
                s,
                system.k,
                usize::from(system.dim) + 1,
                "cover",
                timeout,
                solver,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationVerdict::from_sets(sets))
}

fn parity_verdict(n: usize, k: u8, set: &VertexSet) -> Result<SetVerdict> {
    let start = Instant::now();
    let g = DistanceGraph::build(set, k)?;
    let full = parity_bipartition(n, k)?;
    let a = crate::coloring::ColorAssignment::new(
        set.masks()
            .iter()
            .map(|&m| full.colors()[m as usize])
            .collect(),
    );
    if !verify_coloring(g.graph(), &a)? {
        return Err(Error::Invariant(format!(
            "parity coloring of T({n},{k}) is improper"
        )));
    }
    Ok(SetVerdict {
        label: format!("T({n},{k},2)"),
        n: n as u8,
        k,
        size: set.len(),
        colors: 2,
        outcome: "colored".into(),
        colors_used: Some(a.color_count()),
        route: "parity".into(),
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}

/// `T(9, k, 2)` for `k = 1..=9`: parity for odd `k`, 10 colors for even `k`.
pub fn verify_n9(timeout: Duration, solver: Option<&SatSolver>) -> Result<VerificationVerdict> {
    let sets = (1..=9u8)
        .into_par_iter()
        .map(|k| {
            let t = build_tnk2(9, k)?;
            if k % 2 == 1 {
                parity_verdict(9, k, &t)
            } else {
                color_set(format!("T(9,{k},2)"), &t, k, 10, "cover", timeout, solver)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationVerdict::from_sets(sets))
}

/// `n = 4..=8`, even `k`: the full cube with `n + 1` colors, falling back to
/// `T(n, k, 2)` when the full cube is not colored.
pub fn verify_low_dim(
    timeout: Duration,
    solver: Option<&SatSolver>,
) -> Result<VerificationVerdict> {
    let cases: Vec<(usize, u8)> = (4..=8usize)
        .flat_map(|n| (2..=n as u8).step_by(2).map(move |k| (n, k)))
        .collect();
    let sets = cases
        .into_par_iter()
        .map(|(n, k)| {
            let cube = VertexSet::cube(n)?;
            let full = color_set(
                format!("G({n},{k})"),
                &cube,
                k,
                n + 1,
                "full-cube",
                timeout,
                solver,
            )?;
            if full.colored() {
                return Ok(full);
            }
            color_set(
                format!("T({n},{k},2)"),
                &build_tnk2(n, k)?,
                k,
                n + 1,
                "cover",
                timeout,
                solver,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationVerdict::from_sets(sets))
}

/// Result of the randomized `(10, 4)` cover-membership check.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub samples: usize,
    /// Parity classes checked (each sample contributes up to two).
    pub parts: usize,
    pub via_triangle: usize,
    pub via_sunflower: usize,
    pub via_five_set: usize,
    pub trivial: usize,
    pub failures: Vec<Vec<String>>,
}

impl MembershipReport {
    fn merge(mut self, other: MembershipReport) -> MembershipReport {
        self.samples += other.samples;
        self.parts += other.parts;
        self.via_triangle += other.via_triangle;
        self.via_sunflower += other.via_sunflower;
        self.via_five_set += other.via_five_set;
        self.trivial += other.trivial;
        self.failures.extend(other.failures);
        self
    }
}

/// Which cover set an even diameter-4 set was mapped into.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverRoute {
    Triangle,
    Sunflower,
    FiveSet,
    /// No pair at distance 4: the set sits in a radius-2 ball.
    Trivial,
}

struct Balls {
    /// `ball4[p]` as a 1024-bit set.
    ball4: Vec<[u64; 16]>,
}

impl Balls {
    fn new() -> Self {
        let mut ball4 = vec![[0u64; 16]; 1024];
        for (p, row) in ball4.iter_mut().enumerate() {
            for q in 0..1024u16 {
                if distance(p as u16, q) <= 4 {
                    row[q as usize / 64] |= 1 << (q % 64);
                }
            }
        }
        Balls { ball4 }
    }
}

/// A random greedily-maximal diameter-4 subset of `{0,1}^10`. With
/// `triangle_free`, points closing a `(4,4,4)` triangle are skipped too.
fn random_diameter4_set<R: Rng>(rng: &mut R, balls: &Balls, triangle_free: bool) -> Vec<u16> {
    let mut order: Vec<u16> = (0..1024).collect();
    order.shuffle(rng);
    let mut allowed = [u64::MAX; 16];
    let mut set: Vec<u16> = Vec::new();
    for p in order {
        if allowed[p as usize / 64] >> (p % 64) & 1 == 0 {
            continue;
        }
        if triangle_free {
            let n4: Vec<u16> = set
                .iter()
                .copied()
                .filter(|&q| distance(p, q) == 4)
                .collect();
            let closes = n4
                .iter()
                .enumerate()
                .any(|(i, &a)| n4[i + 1..].iter().any(|&b| distance(a, b) == 4));
            if closes {
                continue;
            }
        }
        set.push(p);
        for (a, b) in allowed.iter_mut().zip(balls.ball4[p as usize].iter()) {
            *a &= b;
        }
    }
    set
}

/// Permutation sending the listed source coordinates (bits) to the listed
/// targets, the rest in increasing order onto the unused targets.
fn perm_from_pairs(pairs: &[(u8, u8)]) -> Vec<u8> {
    let mut perm = vec![u8::MAX; 10];
    let mut used = [false; 10];
    for &(s, t) in pairs {
        perm[s as usize] = t;
        used[t as usize] = true;
    }
    let mut free = (0..10u8).filter(|&t| !used[t as usize]);
    for p in perm.iter_mut() {
        if *p == u8::MAX {
            *p = free.next().expect("free target");
        }
    }
    perm
}

fn bits_of(mask: u16) -> Vec<u8> {
    (0..10u8).filter(|&b| mask >> b & 1 == 1).collect()
}

fn iso_after_translation(perm: Vec<u8>, base: u16) -> Isometry {
    // x -> perm(x ^ base) = perm(x) ^ perm(base)
    let p = Isometry::new(perm, 0).expect("valid permutation");
    let t = p.permute_mask(base);
    Isometry::new(p.perm().to_vec(), t).expect("valid isometry")
}

/// Finds an isometry mapping an even diameter-4 set into one of the cover
/// sets, following the triangle / common-neighbour case split. Returns the
/// isometry, the index of the target set and the route taken.
pub fn cover_embedding(set: &[u16]) -> Option<(Isometry, usize, CoverRoute)> {
    if set.is_empty() {
        return Some((Isometry::identity(10).ok()?, 0, CoverRoute::Trivial));
    }
    for &a in set {
        let n4: Vec<u16> = set
            .iter()
            .copied()
            .filter(|&q| distance(a, q) == 4)
            .collect();
        for (j, &b) in n4.iter().enumerate() {
            if let Some(&c) = n4[j + 1..].iter().find(|&&c| distance(b, c) == 4) {
                let (b, c) = (b ^ a, c ^ a);
                let mut pairs = Vec::new();
                let targets_common = [8u8, 9];
                let targets_b = [6u8, 7];
                let targets_c = [4u8, 5];
                pairs.extend(bits_of(b & c).into_iter().zip(targets_common));
                pairs.extend(bits_of(b & !c).into_iter().zip(targets_b));
                pairs.extend(bits_of(c & !b).into_iter().zip(targets_c));
                return Some((
                    iso_after_translation(perm_from_pairs(&pairs), a),
                    0,
                    CoverRoute::Triangle,
                ));
            }
        }
    }
    let Some(&base) = set
        .iter()
        .find(|&&a| set.iter().any(|&q| distance(a, q) == 4))
    else {
        // Pairwise distances at most 2: translate any point to the origin.
        return Some((
            iso_after_translation((0..10).collect(), set[0]),
            1,
            CoverRoute::Trivial,
        ));
    };
    let nbrs: Vec<u16> = set
        .iter()
        .map(|&q| q ^ base)
        .filter(|q| q.count_ones() == 4)
        .collect();
    let core = nbrs.iter().fold(0x3ffu16, |acc, &q| acc & q);
    let union = nbrs.iter().fold(0u16, |acc, &q| acc | q);
    if nbrs.len() == 1 {
        let pairs: Vec<(u8, u8)> = bits_of(core).into_iter().zip(6u8..10).collect();
        Some((
            iso_after_translation(perm_from_pairs(&pairs), base),
            1,
            CoverRoute::Sunflower,
        ))
    } else if core.count_ones() == 3 {
        let mut pairs: Vec<(u8, u8)> = bits_of(core).into_iter().zip([7u8, 8, 9]).collect();
        let petals: Vec<u8> = nbrs
            .iter()
            .map(|&q| (q & !core).trailing_zeros() as u8)
            .collect();
        pairs.extend(petals.into_iter().zip((0..7u8).rev()));
        Some((
            iso_after_translation(perm_from_pairs(&pairs), base),
            1,
            CoverRoute::Sunflower,
        ))
    } else if union.count_ones() == 5 {
        let pairs: Vec<(u8, u8)> = bits_of(union).into_iter().zip(5u8..10).collect();
        Some((
            iso_after_translation(perm_from_pairs(&pairs), base),
            2,
            CoverRoute::FiveSet,
        ))
    } else {
        None
    }
}

/// Samples `samples` random diameter-4 subsets of `{0,1}^10` and checks that
/// each parity class lands in a cover set under an explicitly constructed
/// isometry. Every fourth sample is grown triangle-free so that the second
/// branch of the argument is exercised. Distance-4 edges never join points
/// of different parity, so the odd class is translated by a unit vector and
/// handled like the even one.
pub fn verify_cover_membership(samples: usize, seed: u64) -> Result<MembershipReport> {
    let system = build_cover_10_4()?;
    let balls = Balls::new();
    let chunk = 1000usize;
    let chunks = samples.div_ceil(chunk);
    let reports = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng =
                ChaCha8Rng::seed_from_u64(seed ^ (c as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let mut report = MembershipReport::default();
            let count = chunk.min(samples - c * chunk);
            for s in 0..count {
                let set = random_diameter4_set(&mut rng, &balls, s % 4 == 3);
                report.samples += 1;
                let even: Vec<u16> = set
                    .iter()
                    .copied()
                    .filter(|p| p.count_ones() % 2 == 0)
                    .collect();
                let odd: Vec<u16> = set
                    .iter()
                    .copied()
                    .filter(|p| p.count_ones() % 2 == 1)
                    .map(|p| p ^ 1)
                    .collect();
                for part in [even, odd] {
                    if part.is_empty() {
                        continue;
                    }
                    report.parts += 1;
                    let placed = cover_embedding(&part).filter(|(g, idx, _)| {
                        part.iter()
                            .all(|&p| system.sets[*idx].contains_mask(g.apply_mask(p)))
                    });
                    match placed {
                        Some((_, _, CoverRoute::Triangle)) => report.via_triangle += 1,
                        Some((_, _, CoverRoute::Sunflower)) => report.via_sunflower += 1,
                        Some((_, _, CoverRoute::FiveSet)) => report.via_five_set += 1,
                        Some((_, _, CoverRoute::Trivial)) => report.trivial += 1,
                        None => report.failures.push(
                            part.iter()
                                .map(|&p| crate::cube::format_mask(p, 10))
                                .collect(),
                        ),
                    }
                }
            }
            report
        })
        .reduce(MembershipReport::default, MembershipReport::merge);
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_vectors_have_weight_four() {
        for s in [U1, U2].iter().chain(V.iter()).chain(W.iter()) {
            assert_eq!(parse_mask(s).unwrap().count_ones(), 4, "{s}");
        }
        assert_eq!(
            distance(parse_mask(U1).unwrap(), parse_mask(U2).unwrap()),
            4
        );
    }

    #[test]
    fn tnk2_matches_scan() {
        for (n, k) in [(10usize, 2u8), (10, 4), (9, 6), (6, 3)] {
            let u = (1u16 << k) - 1;
            let scan: Vec<u16> = (0..1u16 << n)
                .filter(|&v| v.count_ones() <= u32::from(k) && distance(v, u) <= u32::from(k))
                .collect();
            assert_eq!(build_tnk2(n, k).unwrap().masks(), &scan[..]);
        }
        assert!(build_tnk2(4, 5).is_err());
    }

    #[test]
    fn embedding_routes() {
        let tri = [0u16, parse_mask(U1).unwrap(), parse_mask(U2).unwrap()];
        assert_eq!(cover_embedding(&tri).unwrap().2, CoverRoute::Triangle);
        let sun: Vec<u16> = [0].into_iter().chain(masks(&V)).collect();
        assert_eq!(cover_embedding(&sun).unwrap().2, CoverRoute::Sunflower);
        let five: Vec<u16> = [0].into_iter().chain(masks(&W)).collect();
        assert_eq!(cover_embedding(&five).unwrap().2, CoverRoute::FiveSet);
        assert_eq!(
            cover_embedding(&[0b11, 0b101]).unwrap().2,
            CoverRoute::Trivial
        );
    }

    #[test]
    fn small_membership_run() {
        let r = verify_cover_membership(200, 7).unwrap();
        assert_eq!(r.samples, 200);
        assert!(r.failures.is_empty(), "{:?}", r.failures);
        assert!(r.via_triangle > 0 && r.via_sunflower + r.via_five_set > 0);
    }
}
