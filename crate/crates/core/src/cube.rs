//! Points of the Boolean cube `{0,1}^n`, the Hamming metric and the
//! hyperoctahedral isometry group acting on them.
//!
//! A vertex is stored as an `n`-bit mask. Coordinate `i` (1-based, as in
//! written bitstrings) is bit `i - 1`, so the string `"1100"` is the mask
//! `0b0011`.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_DIM: u8 = 16;

fn check_dim(n: usize) -> Result<u8> {
    if (1..=MAX_DIM as usize).contains(&n) {
        Ok(n as u8)
    } else {
        Err(Error::DimensionOutOfRange(n))
    }
}

#[inline]
fn dim_mask(dim: u8) -> u32 {
    (1u32 << dim) - 1
}

/// Popcount of the XOR of two masks.
#[inline]
pub fn distance(a: u16, b: u16) -> u32 {
    (a ^ b).count_ones()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    bits: u16,
    dim: u8,
}

impl Vertex {
    pub fn new(dim: usize, bits: u16) -> Result<Self> {
        let dim = check_dim(dim)?;
        if u32::from(bits) > dim_mask(dim) {
            return Err(Error::InvalidVertex(format!(
                "mask {bits:#x} does not fit in {dim} bits"
            )));
        }
        Ok(Vertex { bits, dim })
    }

    pub fn origin(dim: usize) -> Result<Self> {
        Vertex::new(dim, 0)
    }

    #[inline]
    pub fn bits(self) -> u16 {
        self.bits
    }

    #[inline]
    pub fn dim(self) -> u8 {
        self.dim
    }

    pub fn weight(self) -> u32 {
        self.bits.count_ones()
    }

    /// Render as a bitstring, leftmost character = coordinate 1.
    pub fn to_bitstring(self) -> String {
        format_mask(self.bits, self.dim)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bitstring())
    }
}

impl FromStr for Vertex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bits = parse_mask(s)?;
        Vertex::new(s.len(), bits)
    }
}

pub fn format_mask(bits: u16, dim: u8) -> String {
    (0..dim)
        .map(|i| if bits >> i & 1 == 1 { '1' } else { '0' })
        .collect()
}

pub fn parse_mask(s: &str) -> Result<u16> {
    if s.is_empty() || s.len() > MAX_DIM as usize {
        return Err(Error::InvalidVertex(s.to_string()));
    }
    let mut bits = 0u16;
    for (i, c) in s.chars().enumerate() {
        match c {
            '0' => {}
            '1' => bits |= 1 << i,
            _ => return Err(Error::InvalidVertex(s.to_string())),
        }
    }
    Ok(bits)
}

pub fn hamming_distance(u: Vertex, v: Vertex) -> Result<u32> {
    if u.dim != v.dim {
        return Err(Error::DimensionMismatch(u.dim, v.dim));
    }
    Ok(distance(u.bits, v.bits))
}

/// `|I_n| = 2^n * n!`.
pub fn group_order(n: usize) -> Result<u64> {
    let n = check_dim(n)? as u64;
    Ok((1..=n).product::<u64>() << n)
}

/// An element of the hyperoctahedral group: a coordinate permutation
/// followed by an XOR translation, `g.v = perm(v) ^ translation`.
///
/// `perm[i]` is the coordinate that coordinate `i` is sent to.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Isometry {
    perm: Vec<u8>,
    translation: u16,
}

impl Isometry {
    pub fn new(perm: Vec<u8>, translation: u16) -> Result<Self> {
        let dim = check_dim(perm.len())?;
        let mut seen = 0u32;
        for &p in &perm {
            if p >= dim || seen >> p & 1 == 1 {
                return Err(Error::InvalidVertex(format!(
                    "{perm:?} is not a permutation"
                )));
            }
            seen |= 1 << p;
        }
        if u32::from(translation) > dim_mask(dim) {
            return Err(Error::InvalidVertex(format!(
                "translation {translation:#x} exceeds {dim} bits"
            )));
        }
        Ok(Isometry { perm, translation })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let dim = check_dim(dim)?;
        Ok(Isometry {
            perm: (0..dim).collect(),
            translation: 0,
        })
    }

    pub fn translation_by(dim: usize, translation: u16) -> Result<Self> {
        let mut g = Isometry::identity(dim)?;
        g.translation = translation;
        Isometry::new(g.perm, translation)
    }

    /// Uniform sample from `I_n`.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Self> {
        let dim = check_dim(dim)?;
        let mut perm: Vec<u8> = (0..dim).collect();
        perm.shuffle(rng);
        let translation = (rng.random::<u32>() & dim_mask(dim)) as u16;
        Ok(Isometry { perm, translation })
    }

    pub fn dim(&self) -> u8 {
        self.perm.len() as u8
    }

    pub fn perm(&self) -> &[u8] {
        &self.perm
    }

    pub fn translation(&self) -> u16 {
        self.translation
    }

    /// Permutation part only, applied to a raw mask.
    #[inline]
    pub fn permute_mask(&self, bits: u16) -> u16 {
        let mut out = 0u16;
        let mut rest = bits;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            out |= 1 << self.perm[i];
            rest &= rest - 1;
        }
        out
    }

    #[inline]
    pub fn apply_mask(&self, bits: u16) -> u16 {
        self.permute_mask(bits) ^ self.translation
    }

    pub fn apply(&self, v: Vertex) -> Result<Vertex> {
        if v.dim != self.dim() {
            return Err(Error::DimensionMismatch(self.dim(), v.dim));
        }
        Ok(Vertex {
            bits: self.apply_mask(v.bits),
            dim: v.dim,
        })
    }

    pub fn apply_set(&self, s: &VertexSet) -> Result<VertexSet> {
        if s.dim() != self.dim() {
            return Err(Error::DimensionMismatch(self.dim(), s.dim()));
        }
        Ok(VertexSet::from_masks_unchecked(
            s.dim(),
            s.masks().iter().map(|&m| self.apply_mask(m)),
        ))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Isometry) -> Result<Isometry> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        let perm = other.perm.iter().map(|&p| self.perm[p as usize]).collect();
        let translation = self.permute_mask(other.translation) ^ self.translation;
        Ok(Isometry { perm, translation })
    }

    /// Every element of `I_n`. Only sensible for small `n`.
    pub fn enumerate(dim: usize) -> Result<Vec<Isometry>> {
        let dim = check_dim(dim)?;
        let mut perms = vec![Vec::new()];
        for _ in 0..dim {
            let mut next = Vec::new();
            for p in &perms {
                for c in 0..dim {
                    if !p.contains(&c) {
                        let mut q = p.clone();
                        q.push(c);
                        next.push(q);
                    }
                }
            }
            perms = next;
        }
        let mut out = Vec::with_capacity(perms.len() << dim);
        for p in perms {
            for t in 0..=dim_mask(dim) {
                out.push(Isometry {
                    perm: p.clone(),
                    translation: t as u16,
                });
            }
        }
        Ok(out)
    }
}

/// A duplicate-free set of cube points sharing one dimension, kept in
/// ascending mask order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexSet {
    dim: u8,
    members: Vec<u16>,
}

impl VertexSet {
    pub fn empty(dim: usize) -> Result<Self> {
        Ok(VertexSet {
            dim: check_dim(dim)?,
            members: Vec::new(),
        })
    }

    pub fn from_masks<I: IntoIterator<Item = u16>>(dim: usize, masks: I) -> Result<Self> {
        let dim = check_dim(dim)?;
        let limit = dim_mask(dim);
        let members: Vec<u16> = masks.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&m| u32::from(m) > limit) {
            return Err(Error::InvalidVertex(format!(
                "mask {bad:#x} does not fit in {dim} bits"
            )));
        }
        Ok(Self::from_masks_unchecked(dim, members))
    }

    pub(crate) fn from_masks_unchecked<I: IntoIterator<Item = u16>>(dim: u8, masks: I) -> Self {
        let mut members: Vec<u16> = masks.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        VertexSet { dim, members }
    }

    pub fn from_vertices<I: IntoIterator<Item = Vertex>>(dim: usize, vertices: I) -> Result<Self> {
        let d = check_dim(dim)?;
        let mut masks = Vec::new();
        for v in vertices {
            if v.dim != d {
                return Err(Error::DimensionMismatch(d, v.dim));
            }
            masks.push(v.bits);
        }
        Ok(Self::from_masks_unchecked(d, masks))
    }

    pub fn parse_bitstrings<S: AsRef<str>>(strings: &[S]) -> Result<Self> {
        let first = strings
            .first()
            .ok_or_else(|| Error::InvalidVertex(String::new()))?;
        let dim = first.as_ref().trim().len();
        let mut masks = Vec::with_capacity(strings.len());
        for s in strings {
            let v: Vertex = s.as_ref().parse()?;
            if v.dim as usize != dim {
                return Err(Error::DimensionMismatch(dim as u8, v.dim));
            }
            masks.push(v.bits);
        }
        VertexSet::from_masks(dim, masks)
    }

    /// All of `{0,1}^n`.
    pub fn cube(dim: usize) -> Result<Self> {
        let d = check_dim(dim)?;
        Ok(VertexSet {
            dim: d,
            members: (0..=dim_mask(d)).map(|m| m as u16).collect(),
        })
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn masks(&self) -> &[u16] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.members.iter().map(move |&bits| Vertex {
            bits,
            dim: self.dim,
        })
    }

    pub fn contains_mask(&self, bits: u16) -> bool {
        self.members.binary_search(&bits).is_ok()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v.dim == self.dim && self.contains_mask(v.bits)
    }

    pub fn insert_mask(&mut self, bits: u16) -> bool {
        match self.members.binary_search(&bits) {
            Ok(_) => false,
            Err(pos) => {
                self.members.insert(pos, bits);
                true
            }
        }
    }

    pub fn with_mask(&self, bits: u16) -> VertexSet {
        let mut out = self.clone();
        out.insert_mask(bits);
        out
    }

    pub fn union(&self, other: &VertexSet) -> Result<VertexSet> {
        self.same_dim(other)?;
        Ok(Self::from_masks_unchecked(
            self.dim,
            self.members.iter().chain(&other.members).copied(),
        ))
    }

    pub fn difference(&self, other: &VertexSet) -> Result<VertexSet> {
        self.same_dim(other)?;
        Ok(VertexSet {
            dim: self.dim,
            members: self
                .members
                .iter()
                .copied()
                .filter(|&m| !other.contains_mask(m))
                .collect(),
        })
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.dim == other.dim && self.members.iter().all(|&m| other.contains_mask(m))
    }

    /// Largest pairwise distance, 0 for sets with fewer than two points.
    pub fn diameter(&self) -> u32 {
        let mut best = 0;
        for (i, &a) in self.members.iter().enumerate() {
            for &b in &self.members[i + 1..] {
                best = best.max(distance(a, b));
            }
        }
        best
    }

    pub fn same_dim(&self, other: &VertexSet) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(self.dim, other.dim))
        }
    }

    pub fn to_bitstrings(&self) -> Vec<String> {
        self.members
            .iter()
            .map(|&m| format_mask(m, self.dim))
            .collect()
    }
}
