//! Isometric containment and canonical forms for small point sets.
//!
//! Both routines work on the "column" view of a set: after translating a
//! base point to the origin, coordinate `c` of an ordered point list is the
//! bitmask of points having a one there. Two ordered lists are related by an
//! element of `I_n` (mapping base to base) iff their column multisets agree.

use crate::cube::{distance, Isometry, Vertex, VertexSet};
use crate::error::{Error, Result};

/// Column masks of `points` relative to `points[0]`, bit `j` = point `j`.
fn columns(dim: u8, points: &[u16]) -> Vec<u32> {
    let base = points[0];
    (0..dim)
        .map(|c| {
            points.iter().enumerate().fold(0u32, |acc, (j, &p)| {
                acc | ((((p ^ base) >> c) & 1) as u32) << j
            })
        })
        .collect()
}

fn sorted_columns(dim: u8, points: &[u16]) -> Vec<u32> {
    let mut cols = columns(dim, points);
    cols.sort_unstable();
    cols
}

struct Embedder<'a> {
    dim: u8,
    pattern: Vec<u16>,
    host: &'a [u16],
    images: Vec<u16>,
    used: Vec<bool>,
}

impl Embedder<'_> {
    fn extend(&mut self) -> bool {
        let i = self.images.len();
        if i == self.pattern.len() {
            return true;
        }
        for h in 0..self.host.len() {
            if self.used[h] {
                continue;
            }
            let cand = self.host[h];
            let f = self.pattern[i];
            let consistent =
                (0..i).all(|j| distance(cand, self.images[j]) == distance(f, self.pattern[j]));
            if !consistent {
                continue;
            }
            self.images.push(cand);
            if sorted_columns(self.dim, &self.images)
                == sorted_columns(self.dim, &self.pattern[..=i])
            {
                self.used[h] = true;
                if self.extend() {
                    return true;
                }
                self.used[h] = false;
            }
            self.images.pop();
        }
        false
    }

    fn isometry(&self) -> Isometry {
        let src = columns(self.dim, &self.pattern);
        let dst = columns(self.dim, &self.images);
        let mut taken = vec![false; dst.len()];
        let mut perm = vec![0u8; self.dim as usize];
        for (c, col) in src.iter().enumerate() {
            let target = (0..dst.len())
                .find(|&d| !taken[d] && dst[d] == *col)
                .expect("column multisets agree");
            taken[target] = true;
            perm[c] = target as u8;
        }
        let mut g = Isometry::new(perm, 0).expect("valid permutation");
        let t = g.permute_mask(self.pattern[0]) ^ self.images[0];
        g = Isometry::new(g.perm().to_vec(), t).expect("valid translation");
        g
    }
}

fn embed(dim: u8, host: &[u16], pattern: Vec<u16>, fixed: Option<u16>) -> Option<Isometry> {
    let mut e = Embedder {
        dim,
        pattern,
        host,
        images: Vec::new(),
        used: vec![false; host.len()],
    };
    if let Some(p) = fixed {
        let h = host.iter().position(|&x| x == p)?;
        e.images.push(p);
        e.used[h] = true;
    }
    if e.extend() {
        Some(e.isometry())
    } else {
        None
    }
}

/// Find `g` with `g . pattern ⊆ host`, optionally requiring that some point
/// of the pattern lands on `through`.
pub fn find_embedding(
    host: &VertexSet,
    pattern: &VertexSet,
    through: Option<Vertex>,
) -> Result<Option<Isometry>> {
    host.same_dim(pattern)?;
    if let Some(t) = through {
        if t.dim() != host.dim() {
            return Err(Error::DimensionMismatch(host.dim(), t.dim()));
        }
    }
    let dim = host.dim();
    if pattern.len() > host.len() {
        return Ok(None);
    }
    if pattern.is_empty() {
        return Ok(if through.is_none() {
            Some(Isometry::identity(dim as usize)?)
        } else {
            None
        });
    }
    let f = pattern.masks();
    match through {
        None => Ok(embed(dim, host.masks(), f.to_vec(), None)),
        Some(t) => {
            for lead in 0..f.len() {
                let mut order = Vec::with_capacity(f.len());
                order.push(f[lead]);
                order.extend(
                    f.iter()
                        .enumerate()
                        .filter(|&(i, _)| i != lead)
                        .map(|(_, &x)| x),
                );
                if let Some(g) = embed(dim, host.masks(), order, Some(t.bits())) {
                    return Ok(Some(g));
                }
            }
            Ok(None)
        }
    }
}

/// True iff some isometry maps `pattern` onto a subset of `host`.
pub fn isometric_contains(host: &VertexSet, pattern: &VertexSet) -> Result<bool> {
    Ok(find_embedding(host, pattern, None)?.is_some())
}

/// As [`isometric_contains`], restricted to copies that use `through`.
pub fn isometric_contains_through(
    host: &VertexSet,
    pattern: &VertexSet,
    through: Vertex,
) -> Result<bool> {
    Ok(find_embedding(host, pattern, Some(through))?.is_some())
}

/// A distinguished member of the `I_n`-orbit of `set`.
///
/// Orderings of the points are built one row at a time; at every depth only
/// the prefixes whose sorted (descending) column multiset is maximal survive.
/// The winning ordering's columns, sorted descending and laid out as
/// coordinates `0..n`, give the representative. The result always contains
/// the origin.
pub fn canonical_form(set: &VertexSet) -> VertexSet {
    let dim = set.dim();
    let pts = set.masks();
    if pts.is_empty() {
        return set.clone();
    }
    let mut frontier: Vec<Vec<u16>> = pts.iter().map(|&p| vec![p]).collect();
    for _ in 1..pts.len() {
        let mut best: Option<Vec<u32>> = None;
        let mut next = Vec::new();
        for prefix in &frontier {
            for &p in pts {
                if prefix.contains(&p) {
                    continue;
                }
                let mut cand = prefix.clone();
                cand.push(p);
                let mut key = columns(dim, &cand);
                key.sort_unstable_by(|a, b| b.cmp(a));
                match &best {
                    Some(b) if key < *b => {}
                    Some(b) if key == *b => next.push(cand),
                    _ => {
                        best = Some(key);
                        next.clear();
                        next.push(cand);
                    }
                }
            }
        }
        frontier = next;
    }
    let mut cols = columns(dim, &frontier[0]);
    cols.sort_unstable_by(|a, b| b.cmp(a));
    let masks = (0..pts.len()).map(|j| {
        cols.iter()
            .enumerate()
            .fold(0u16, |acc, (c, col)| acc | (((col >> j) & 1) as u16) << c)
    });
    VertexSet::from_masks_unchecked(dim, masks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::Isometry;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn set(strs: &[&str]) -> VertexSet {
        VertexSet::parse_bitstrings(strs).unwrap()
    }

    fn k4_prime() -> VertexSet {
        set(&["0000000000", "1111110000", "1110001110", "0001111110"])
    }

    fn k4_double_prime() -> VertexSet {
        set(&["0000000000", "1111110000", "1110001110", "0101011011"])
    }

    /// Exhaustive oracle over the whole group.
    fn brute_contains(host: &VertexSet, pattern: &VertexSet) -> bool {
        Isometry::enumerate(host.dim() as usize)
            .unwrap()
            .iter()
            .any(|g| g.apply_set(pattern).unwrap().is_subset(host))
    }

    #[test]
    fn edge_embeds_into_clique() {
        let edge = set(&["0000000000", "0011111100"]);
        assert!(isometric_contains(&k4_prime(), &edge).unwrap());
    }

    #[test]
    fn k4_classes_are_distinct() {
        assert!(!isometric_contains(&k4_prime(), &k4_double_prime()).unwrap());
        assert!(!isometric_contains(&k4_double_prime(), &k4_prime()).unwrap());
        assert_ne!(
            canonical_form(&k4_prime()),
            canonical_form(&k4_double_prime())
        );
    }

    #[test]
    fn random_image_is_contained_and_witnessed() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let g = Isometry::random(10, &mut rng).unwrap();
            let img = g.apply_set(&k4_double_prime()).unwrap();
            let w = find_embedding(&img, &k4_double_prime(), None)
                .unwrap()
                .unwrap();
            assert!(w.apply_set(&k4_double_prime()).unwrap().is_subset(&img));
        }
    }

    #[test]
    fn through_requires_the_point() {
        let host = set(&["0000000000", "1111110000", "1110001110", "0000000001"]);
        let edge = set(&["0000000000", "1111110000"]);
        let far = "0000000001".parse().unwrap();
        assert!(!isometric_contains_through(&host, &edge, far).unwrap());
        let near = "1110001110".parse().unwrap();
        assert!(isometric_contains_through(&host, &edge, near).unwrap());
    }

    #[test]
    fn agrees_with_exhaustive_group_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 2..=5usize {
            for _ in 0..60 {
                let hs = rng.random_range(1..=5);
                let ps = rng.random_range(1..=4);
                let host =
                    VertexSet::from_masks(n, (0..hs).map(|_| rng.random_range(0..1u16 << n)))
                        .unwrap();
                let pattern =
                    VertexSet::from_masks(n, (0..ps).map(|_| rng.random_range(0..1u16 << n)))
                        .unwrap();
                assert_eq!(
                    isometric_contains(&host, &pattern).unwrap(),
                    brute_contains(&host, &pattern),
                    "host={:?} pattern={:?}",
                    host.to_bitstrings(),
                    pattern.to_bitstrings()
                );
            }
        }
    }

    #[test]
    fn canonical_form_of_a_point_is_origin() {
        let s = set(&["0110100101"]);
        assert_eq!(canonical_form(&s), set(&["0000000000"]));
    }

    #[test]
    fn canonical_form_is_orbit_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = canonical_form(&k4_prime());
        for _ in 0..100 {
            let g = Isometry::random(10, &mut rng).unwrap();
            assert_eq!(canonical_form(&g.apply_set(&k4_prime()).unwrap()), c);
        }
    }

    #[test]
    fn canonical_form_is_in_orbit() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let k = rng.random_range(1..=8);
            let s =
                VertexSet::from_masks(10, (0..k).map(|_| rng.random_range(0..1024u16))).unwrap();
            let c = canonical_form(&s);
            assert_eq!(c.len(), s.len());
            assert!(isometric_contains(&s, &c).unwrap());
        }
    }

    #[test]
    fn canonical_form_separates_orbits_exhaustively() {
        // n = 4, all 3-point sets: equal forms iff related by the group.
        let n = 4;
        let group = Isometry::enumerate(n).unwrap();
        let sets: Vec<VertexSet> = (0..16u16)
            .flat_map(|a| (a + 1..16).flat_map(move |b| (b + 1..16).map(move |c| (a, b, c))))
            .map(|(a, b, c)| VertexSet::from_masks(n, [a, b, c]).unwrap())
            .step_by(7)
            .collect();
        for x in &sets {
            for y in &sets {
                let same_orbit = group.iter().any(|g| g.apply_set(x).unwrap() == *y);
                assert_eq!(canonical_form(x) == canonical_form(y), same_orbit);
            }
        }
    }
}
