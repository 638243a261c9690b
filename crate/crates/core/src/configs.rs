//! Named distance-6 clique configurations in `{0,1}^10`, their fixed
//! representatives, fast detectors and the exhaustive classification of
//! completions of a base edge.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cube::{distance, parse_mask, Isometry, Vertex, VertexSet};
use crate::error::{Error, Result};
use crate::iso::{canonical_form, isometric_contains, isometric_contains_through};

pub const CONFIG_DIM: usize = 10;
/// Edge length of every clique configuration.
pub const CLIQUE_DISTANCE: u32 = 6;

const ORIGIN: &str = "0000000000";
const K2_B: &str = "1111110000";
const K3_C: &str = "1110001110";
const K4P_D: &str = "0001111110";
const K4PP_D: &str = "0101011011";
// First completions in ascending mask order; see `frozen_representatives_regenerate`.
const K5_E: &str = "1001101101";
const K6_F: &str = "0010110111";
const K6_PLUS_X: &str = "0011000000";
const K5E4_X: &str = "1001001001";
const K5E2_X: &str = "0000101000";

/// Which non-edge distances a `K5 - e` may realize.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MissingEdge {
    Two,
    Four,
    Either,
}

impl MissingEdge {
    fn allows(self, d: u32) -> bool {
        match self {
            MissingEdge::Two => d == 2,
            MissingEdge::Four => d == 4,
            MissingEdge::Either => d == 2 || d == 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NamedConfig {
    K2,
    K3,
    K4Prime,
    K4DoublePrime,
    K5,
    K5MinusE(MissingEdge),
    K6,
    K6PlusV246666,
}

impl NamedConfig {
    pub const ALL: [NamedConfig; 8] = [
        NamedConfig::K2,
        NamedConfig::K3,
        NamedConfig::K4Prime,
        NamedConfig::K4DoublePrime,
        NamedConfig::K5,
        NamedConfig::K5MinusE(MissingEdge::Either),
        NamedConfig::K6,
        NamedConfig::K6PlusV246666,
    ];

    /// Fixed realization in dimension 10.
    ///
    /// K5 and K6 extend K''4: K'4 has no common distance-6 neighbour. The
    /// K5 - e representative for `Either` is the one built on K'4.
    pub fn representative(self) -> VertexSet {
        let pts: &[&str] = match self {
            NamedConfig::K2 => &[ORIGIN, K2_B],
            NamedConfig::K3 => &[ORIGIN, K2_B, K3_C],
            NamedConfig::K4Prime => &[ORIGIN, K2_B, K3_C, K4P_D],
            NamedConfig::K4DoublePrime => &[ORIGIN, K2_B, K3_C, K4PP_D],
            NamedConfig::K5 => &[ORIGIN, K2_B, K3_C, K4PP_D, K5_E],
            NamedConfig::K6 => &[ORIGIN, K2_B, K3_C, K4PP_D, K5_E, K6_F],
            NamedConfig::K6PlusV246666 => &[ORIGIN, K2_B, K3_C, K4PP_D, K5_E, K6_F, K6_PLUS_X],
            NamedConfig::K5MinusE(MissingEdge::Two) => &[ORIGIN, K2_B, K3_C, K4PP_D, K5E2_X],
            NamedConfig::K5MinusE(_) => &[ORIGIN, K2_B, K3_C, K4P_D, K5E4_X],
        };
        VertexSet::from_masks(
            CONFIG_DIM,
            pts.iter().map(|s| parse_mask(s).expect("valid literal")),
        )
        .expect("valid representative")
    }

    /// One set per isometry class the tag stands for. Only `K5 - e` spans
    /// several classes; the rest are single orbits.
    pub fn class_representatives(self) -> Vec<VertexSet> {
        match self {
            NamedConfig::K5MinusE(m) => {
                let mut out = Vec::new();
                for d in [2u32, 4] {
                    if m.allows(d) {
                        out.extend(k5_minus_e_classes(d).iter().cloned());
                    }
                }
                out
            }
            other => vec![other.representative()],
        }
    }

    /// Does `set ∪ {v}` contain a copy of this configuration that uses `v`?
    pub fn detect(self, set: &VertexSet, v: Vertex) -> bool {
        detect_masks(self, set.masks(), v.bits())
    }

    pub fn label(self) -> &'static str {
        match self {
            NamedConfig::K2 => "K2",
            NamedConfig::K3 => "K3",
            NamedConfig::K4Prime => "K4'",
            NamedConfig::K4DoublePrime => "K4''",
            NamedConfig::K5 => "K5",
            NamedConfig::K5MinusE(MissingEdge::Either) => "K5-e",
            NamedConfig::K5MinusE(MissingEdge::Two) => "K5-e:2",
            NamedConfig::K5MinusE(MissingEdge::Four) => "K5-e:4",
            NamedConfig::K6 => "K6",
            NamedConfig::K6PlusV246666 => "K6+v246666",
        }
    }
}

impl fmt::Display for NamedConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for NamedConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_uppercase().replace(['_', ' '], "");
        Ok(match norm.as_str() {
            "K2" => NamedConfig::K2,
            "K3" => NamedConfig::K3,
            "K4'" | "K4PRIME" => NamedConfig::K4Prime,
            "K4''" | "K4DOUBLEPRIME" => NamedConfig::K4DoublePrime,
            "K5" => NamedConfig::K5,
            "K5-E" | "K5MINUSE" => NamedConfig::K5MinusE(MissingEdge::Either),
            "K5-E:2" | "K5MINUSE:2" => NamedConfig::K5MinusE(MissingEdge::Two),
            "K5-E:4" | "K5MINUSE:4" => NamedConfig::K5MinusE(MissingEdge::Four),
            "K6" => NamedConfig::K6,
            "K6+V246666" | "K6+V(246666)" | "K6PLUSV246666" => NamedConfig::K6PlusV246666,
            _ => return Err(Error::UnknownTag(s.to_string())),
        })
    }
}

impl Serialize for NamedConfig {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

impl<'de> Deserialize<'de> for NamedConfig {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A forbidden pattern: a named configuration or an explicit point set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pattern {
    Named(NamedConfig),
    Explicit(VertexSet),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ForbiddenFamily {
    patterns: Vec<Pattern>,
}

impl ForbiddenFamily {
    pub fn named<I: IntoIterator<Item = NamedConfig>>(tags: I) -> Self {
        ForbiddenFamily {
            patterns: tags.into_iter().map(Pattern::Named).collect(),
        }
    }

    pub fn push(&mut self, p: Pattern) {
        self.patterns.push(p);
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// Some pattern embeds in `set ∪ {v}` through `v`.
    pub fn completes(&self, set: &VertexSet, v: u16) -> Result<bool> {
        for p in &self.patterns {
            let hit = match p {
                Pattern::Named(tag) => detect_masks(*tag, set.masks(), v),
                Pattern::Explicit(f) => {
                    let host = set.with_mask(v);
                    isometric_contains_through(&host, f, Vertex::new(host.dim() as usize, v)?)?
                }
            };
            if hit {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// `set ∪ {a, b}` holds a pattern through `b`.
    pub fn completes_pair(&self, set: &VertexSet, a: u16, b: u16) -> Result<bool> {
        let mut masks = set.masks().to_vec();
        masks.push(a);
        for p in &self.patterns {
            let hit = match p {
                Pattern::Named(tag) => detect_masks(*tag, &masks, b),
                Pattern::Explicit(_) => return self.completes(&set.with_mask(a), b),
            };
            if hit {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Some pattern already embeds in `set`.
    pub fn embeds_in(&self, set: &VertexSet) -> Result<bool> {
        for p in &self.patterns {
            let hit = match p {
                Pattern::Named(tag) => set.masks().iter().enumerate().any(|(i, &v)| {
                    let others: Vec<u16> = set.masks()[..i].to_vec();
                    detect_masks(*tag, &others, v)
                }),
                Pattern::Explicit(f) => isometric_contains(set, f)?,
            };
            if hit {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// All `size`-subsets of `pool` that are pairwise at distance 6.
fn cliques_in(pool: &[u16], size: usize) -> Vec<Vec<u16>> {
    fn grow(pool: &[u16], start: usize, size: usize, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..pool.len() {
            if cur.iter().all(|&c| distance(c, pool[i]) == CLIQUE_DISTANCE) {
                cur.push(pool[i]);
                grow(pool, i + 1, size, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if size == 0 {
        out.push(Vec::new());
    } else {
        grow(pool, 0, size, &mut Vec::new(), &mut out);
    }
    out
}

fn has_clique(pool: &[u16], size: usize) -> bool {
    fn grow(pool: &[u16], start: usize, need: usize, cur: &mut Vec<u16>) -> bool {
        if need == 0 {
            return true;
        }
        for i in start..pool.len() {
            if cur.iter().all(|&c| distance(c, pool[i]) == CLIQUE_DISTANCE) {
                cur.push(pool[i]);
                if grow(pool, i + 1, need - 1, cur) {
                    return true;
                }
                cur.pop();
            }
        }
        false
    }
    grow(pool, 0, size, &mut Vec::new())
}

fn profile(v: u16, pts: &[u16]) -> Vec<u32> {
    let mut d: Vec<u32> = pts.iter().map(|&p| distance(v, p)).collect();
    d.sort_unstable();
    d
}

const V246666: [u32; 6] = [2, 4, 6, 6, 6, 6];

fn detect_masks(tag: NamedConfig, set: &[u16], v: u16) -> bool {
    let others: Vec<u16> = set.iter().copied().filter(|&s| s != v).collect();
    let nbrs: Vec<u16> = others
        .iter()
        .copied()
        .filter(|&s| distance(s, v) == CLIQUE_DISTANCE)
        .collect();
    match tag {
        NamedConfig::K2 => !nbrs.is_empty(),
        NamedConfig::K3 => has_clique(&nbrs, 2),
        NamedConfig::K5 => has_clique(&nbrs, 4),
        NamedConfig::K6 => has_clique(&nbrs, 5),
        NamedConfig::K4Prime => cliques_in(&nbrs, 3)
            .iter()
            .any(|t| t[0] ^ t[1] ^ t[2] ^ v == 0),
        NamedConfig::K4DoublePrime => cliques_in(&nbrs, 3)
            .iter()
            .any(|t| t[0] ^ t[1] ^ t[2] ^ v != 0),
        NamedConfig::K5MinusE(m) => {
            // v on the missing edge: partner x, plus a triangle adjacent to both.
            let on_edge = others.iter().any(|&x| {
                m.allows(distance(x, v)) && {
                    let common: Vec<u16> = nbrs
                        .iter()
                        .copied()
                        .filter(|&a| distance(a, x) == CLIQUE_DISTANCE)
                        .collect();
                    has_clique(&common, 3)
                }
            });
            on_edge
                || (0..nbrs.len()).any(|i| {
                    (i + 1..nbrs.len()).any(|j| {
                        let (a, b) = (nbrs[i], nbrs[j]);
                        if !m.allows(distance(a, b)) {
                            return false;
                        }
                        let common: Vec<u16> = nbrs
                            .iter()
                            .copied()
                            .filter(|&c| {
                                distance(c, a) == CLIQUE_DISTANCE
                                    && distance(c, b) == CLIQUE_DISTANCE
                            })
                            .collect();
                        has_clique(&common, 2)
                    })
                })
        }
        NamedConfig::K6PlusV246666 => {
            let as_extra = cliques_in(&others, 6)
                .iter()
                .any(|k6| profile(v, k6) == V246666);
            as_extra
                || cliques_in(&nbrs, 5).iter().any(|k5| {
                    let mut k6 = k5.clone();
                    k6.push(v);
                    others
                        .iter()
                        .any(|&x| !k6.contains(&x) && profile(x, &k6) == V246666)
                })
        }
    }
}

/// XOR test separating the two classes of distance-6 four-cliques.
pub fn classify_k4(set: &VertexSet) -> Result<NamedConfig> {
    let pts = set.masks();
    let distances: Vec<u32> = (0..pts.len())
        .flat_map(|i| (i + 1..pts.len()).map(move |j| distance(pts[i], pts[j])))
        .collect();
    if pts.len() != 4 || distances.iter().any(|&d| d != CLIQUE_DISTANCE) {
        return Err(Error::NotAClique {
            k: CLIQUE_DISTANCE as u8,
            distances,
        });
    }
    Ok(if pts.iter().fold(0, |acc, &p| acc ^ p) == 0 {
        NamedConfig::K4Prime
    } else {
        NamedConfig::K4DoublePrime
    })
}

fn base_edge() -> (u16, u16) {
    (0, parse_mask(K2_B).expect("literal"))
}

/// Points at distance 6 from both ends of the base edge.
fn triangle_apexes() -> Vec<u16> {
    let (a, b) = base_edge();
    (0..1u16 << CONFIG_DIM)
        .filter(|&v| distance(v, a) == CLIQUE_DISTANCE && distance(v, b) == CLIQUE_DISTANCE)
        .collect()
}

/// Every `size`-clique containing the base edge.
pub fn base_edge_cliques(size: usize) -> Vec<VertexSet> {
    let (a, b) = base_edge();
    cliques_in(&triangle_apexes(), size.saturating_sub(2))
        .into_iter()
        .map(|rest| {
            VertexSet::from_masks(CONFIG_DIM, rest.into_iter().chain([a, b])).expect("dimension 10")
        })
        .collect()
}

/// Every `K5 - e` through the base edge whose missing pair is at distance `d`.
pub fn base_edge_k5_minus_e(d: u32) -> Vec<VertexSet> {
    let (a, b) = base_edge();
    let apex = triangle_apexes();
    let mut out = BTreeSet::new();
    // Missing pair among the three added points.
    for (i, &x) in apex.iter().enumerate() {
        for &y in &apex[i + 1..] {
            if distance(x, y) != d {
                continue;
            }
            for &z in &apex {
                if distance(z, x) == CLIQUE_DISTANCE && distance(z, y) == CLIQUE_DISTANCE {
                    out.insert(VertexSet::from_masks(CONFIG_DIM, [a, b, x, y, z]).expect("dim"));
                }
            }
        }
    }
    // Missing pair touches the base edge.
    let off: Vec<u16> = (0..1u16 << CONFIG_DIM)
        .filter(|&v| {
            let p = [distance(v, a), distance(v, b)];
            p.contains(&d) && p.contains(&CLIQUE_DISTANCE)
        })
        .collect();
    for &x in &off {
        let common: Vec<u16> = apex
            .iter()
            .copied()
            .filter(|&y| distance(x, y) == CLIQUE_DISTANCE)
            .collect();
        for pair in cliques_in(&common, 2) {
            out.insert(
                VertexSet::from_masks(CONFIG_DIM, [a, b, x, pair[0], pair[1]]).expect("dim"),
            );
        }
    }
    out.into_iter().collect()
}

fn k5_minus_e_classes(d: u32) -> &'static [VertexSet] {
    static TWO: OnceLock<Vec<VertexSet>> = OnceLock::new();
    static FOUR: OnceLock<Vec<VertexSet>> = OnceLock::new();
    let cell = if d == 2 { &TWO } else { &FOUR };
    cell.get_or_init(|| classes_of(&base_edge_k5_minus_e(d)).into_keys().collect())
}

/// Bucket sets by canonical form.
fn classes_of(sets: &[VertexSet]) -> BTreeMap<VertexSet, usize> {
    let forms: Vec<VertexSet> = sets.par_iter().map(canonical_form).collect();
    let mut out = BTreeMap::new();
    for f in forms {
        *out.entry(f).or_insert(0) += 1;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCount {
    pub family: String,
    pub sets: usize,
    pub classes: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileClasses {
    pub profile: Vec<u32>,
    pub extensions: usize,
    pub classes: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub counts: Vec<ClassCount>,
    /// K4 completions whose XOR verdict disagrees with their canonical class.
    pub k4_xor_disagreements: usize,
    /// Number of canonical K4 classes with XOR = 0.
    pub k4_prime_classes: usize,
    pub k4_double_prime_classes: usize,
    /// Every one-point extension of a K6 keeping diameter 6, by distance profile.
    pub k6_extension_profiles: Vec<ProfileClasses>,
    /// Random isometric images that failed to land in their own class.
    pub orbit_check_failures: usize,
}

impl ClassificationReport {
    pub fn classes_of(&self, family: &str) -> Option<usize> {
        self.counts
            .iter()
            .find(|c| c.family == family)
            .map(|c| c.classes)
    }

    /// The claims: K3, K5, K6 and K6+v(246666) are single classes, K4 has
    /// exactly two, split by the XOR test.
    pub fn claims_hold(&self) -> bool {
        ["K3", "K5", "K6", "K6+v246666"]
            .iter()
            .all(|f| self.classes_of(f) == Some(1))
            && self.classes_of("K4") == Some(2)
            && self.k4_xor_disagreements == 0
            && self.k4_prime_classes == 1
            && self.k4_double_prime_classes == 1
            && self.orbit_check_failures == 0
    }
}

/// Exhaustively complete the base edge `{0, 1111110000}` to cliques and
/// `K6 + v` configurations inside `{0,1}^10` and bucket them by canonical
/// form. `sample_count` random isometric images of each class are
/// re-canonicalized as a consistency check.
pub fn verify_classification_claims(sample_count: usize) -> ClassificationReport {
    assert!(sample_count >= 1, "sample_count must be positive");
    let mut counts = Vec::new();
    let mut all_classes: Vec<VertexSet> = Vec::new();
    let mut k4_xor_disagreements = 0;
    let mut k4_prime_classes = 0;
    let mut k4_double_prime_classes = 0;

    for size in 3..=6 {
        let sets = base_edge_cliques(size);
        let forms: Vec<VertexSet> = sets.par_iter().map(canonical_form).collect();
        let classes: BTreeSet<&VertexSet> = forms.iter().collect();
        if size == 4 {
            let mut verdict: BTreeMap<&VertexSet, BTreeSet<NamedConfig>> = BTreeMap::new();
            for (s, f) in sets.iter().zip(&forms) {
                verdict
                    .entry(f)
                    .or_default()
                    .insert(classify_k4(s).expect("4-clique"));
            }
            k4_xor_disagreements = verdict.values().filter(|v| v.len() > 1).count();
            let xor_of = |class: &VertexSet| classify_k4(class).expect("4-clique");
            k4_prime_classes = classes
                .iter()
                .filter(|c| xor_of(c) == NamedConfig::K4Prime)
                .count();
            k4_double_prime_classes = classes.len() - k4_prime_classes;
        }
        all_classes.extend(classes.iter().map(|c| (*c).clone()));
        counts.push(ClassCount {
            family: format!("K{size}"),
            sets: sets.len(),
            classes: classes.len(),
        });
    }

    let k6s = base_edge_cliques(6);
    let extensions: Vec<(Vec<u32>, VertexSet)> = k6s
        .par_iter()
        .flat_map_iter(|k6| {
            let pts = k6.masks().to_vec();
            (0..1u16 << CONFIG_DIM)
                .filter(move |v| {
                    !pts.contains(v) && pts.iter().all(|&p| distance(*v, p) <= CLIQUE_DISTANCE)
                })
                .map(move |v| (profile(v, k6.masks()), k6.with_mask(v)))
        })
        .collect();
    let mut by_profile: BTreeMap<Vec<u32>, Vec<VertexSet>> = BTreeMap::new();
    for (p, s) in extensions {
        by_profile.entry(p).or_default().push(s);
    }
    let mut k6_extension_profiles = Vec::new();
    for (p, sets) in &by_profile {
        let classes = classes_of(sets);
        if p.as_slice() == V246666 {
            counts.push(ClassCount {
                family: "K6+v246666".into(),
                sets: sets.len(),
                classes: classes.len(),
            });
            all_classes.extend(classes.keys().cloned());
        }
        k6_extension_profiles.push(ProfileClasses {
            profile: p.clone(),
            extensions: sets.len(),
            classes: classes.len(),
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut orbit_check_failures = 0;
    for class in &all_classes {
        for _ in 0..sample_count {
            let g = Isometry::random(CONFIG_DIM, &mut rng).expect("dim 10");
            let image = g.apply_set(class).expect("dim 10");
            if canonical_form(&image) != *class {
                orbit_check_failures += 1;
            }
        }
    }

    ClassificationReport {
        counts,
        k4_xor_disagreements,
        k4_prime_classes,
        k4_double_prime_classes,
        k6_extension_profiles,
        orbit_check_failures,
    }
}
