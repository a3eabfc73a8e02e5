//! Matchings as edge bitstrings, the collision-penalty fitness, and the
//! `E^i O^j` codec for maximum matchings on even paths.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{EdoError, Result};
use crate::graph::{Graph, GraphKind};

const WORD: usize = 64;

/// A bitstring over the edges of a graph; bit `b` set means edge `b` is selected.
///
/// Any bit pattern is representable, including invalid matchings.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    len: usize,
    words: Vec<u64>,
}

impl Matching {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    /// Bitstring of length `len` with exactly the given edges set.
    pub fn from_edges(len: usize, edges: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut x = Self::zeros(len);
        for e in edges {
            if e >= len {
                return Err(EdoError::EdgeOutOfRange {
                    edge: e,
                    edges: len,
                });
            }
            x.set(e, true);
        }
        Ok(x)
    }

    /// Parses a string of `0`/`1` characters, edge 0 first.
    pub fn from_bit_str(s: &str) -> Result<Self> {
        let mut x = Self::zeros(s.len());
        for (b, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => x.set(b, true),
                other => {
                    return Err(EdoError::InvalidHex(format!(
                        "unexpected character {other:?} in bit string"
                    )))
                }
            }
        }
        Ok(x)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, b: usize) -> bool {
        debug_assert!(b < self.len);
        self.words[b / WORD] >> (b % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, b: usize, value: bool) {
        debug_assert!(b < self.len);
        let mask = 1u64 << (b % WORD);
        if value {
            self.words[b / WORD] |= mask;
        } else {
            self.words[b / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, b: usize) {
        debug_assert!(b < self.len);
        self.words[b / WORD] ^= 1u64 << (b % WORD);
    }

    /// `|x|`, the number of selected edges.
    #[inline]
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Indices of set bits, ascending.
    pub fn ones(&self) -> Ones<'_> {
        Ones {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    /// Overwrites `self` with `other` without reallocating when lengths agree.
    pub fn copy_from(&mut self, other: &Matching) {
        self.len = other.len;
        self.words.clone_from(&other.words);
    }

    fn check_len(&self, other: &Matching) -> Result<()> {
        if self.len == other.len {
            Ok(())
        } else {
            Err(EdoError::LengthMismatch {
                expected: self.len,
                found: other.len,
            })
        }
    }

    #[inline]
    pub(crate) fn hamming_unchecked(&self, other: &Matching) -> u64 {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as u64)
            .sum()
    }

    /// Lower-case hex of the little-endian byte encoding (bit 0 of byte 0 is edge 0).
    pub fn to_hex(&self) -> String {
        let bytes: Vec<u8> = self
            .words
            .iter()
            .flat_map(|w| w.to_le_bytes())
            .take(self.len.div_ceil(8))
            .collect();
        hex::encode(bytes)
    }

    /// Inverse of [`Matching::to_hex`]; `len` is the edge count.
    pub fn from_hex(len: usize, s: &str) -> Result<Self> {
        let bytes = hex::decode(s).map_err(|e| EdoError::InvalidHex(e.to_string()))?;
        if bytes.len() != len.div_ceil(8) {
            return Err(EdoError::InvalidHex(format!(
                "{} bytes cannot encode {len} edges",
                bytes.len()
            )));
        }
        let mut x = Self::zeros(len);
        for (k, byte) in bytes.iter().enumerate() {
            x.words[k / 8] |= (*byte as u64) << (8 * (k % 8));
        }
        if !len.is_multiple_of(WORD) {
            let tail = x.words[len / WORD] >> (len % WORD);
            if tail != 0 {
                return Err(EdoError::InvalidHex(format!(
                    "bits set beyond edge count {len}"
                )));
            }
        }
        Ok(x)
    }
}

impl fmt::Debug for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matching({self})")
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in 0..self.len {
            f.write_str(if self.get(b) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl Serialize for Matching {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_hex())
    }
}

/// Iterator over set bit positions.
pub struct Ones<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        while self.current == 0 {
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
        let bit = self.current.trailing_zeros() as usize;
        self.current &= self.current - 1;
        Some(self.index * WORD + bit)
    }
}

/// Number of `i` in `E^i O^{m/2 - i}`: the count of leading even-indexed matching edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PathProfile(pub usize);

fn check_graph(g: &Graph, x: &Matching) -> Result<()> {
    if x.len() == g.m() {
        Ok(())
    } else {
        Err(EdoError::LengthMismatch {
            expected: g.m(),
            found: x.len(),
        })
    }
}

pub fn hamming(x: &Matching, y: &Matching) -> Result<u64> {
    x.check_len(y)?;
    Ok(x.hamming_unchecked(y))
}

/// Pairs of selected edges that share an endpoint.
pub fn collisions(g: &Graph, x: &Matching) -> Result<u64> {
    check_graph(g, x)?;
    Ok(MatchingChecker::new(g).collisions(g, x))
}

/// `-col(x)` for invalid matchings, `|x|` otherwise. The empty matching is valid.
pub fn fitness(g: &Graph, x: &Matching) -> Result<i64> {
    let col = collisions(g, x)?;
    Ok(if col > 0 {
        -(col as i64)
    } else {
        x.count_ones() as i64
    })
}

pub fn is_maximum_matching(g: &Graph, x: &Matching) -> Result<bool> {
    check_graph(g, x)?;
    Ok(MatchingChecker::new(g).is_maximum(g, x))
}

/// The maximum matching `E^i O^{m/2 - i}` on an even path with `m` edges.
pub fn path_matching_from_profile(m: usize, profile: PathProfile) -> Result<Matching> {
    if !m.is_multiple_of(2) {
        return Err(EdoError::OddPathLength(m));
    }
    let i = profile.0;
    if i > m / 2 {
        return Err(EdoError::ProfileOutOfRange {
            profile: i,
            max: m / 2,
        });
    }
    let evens = (0..i).map(|k| 2 * k);
    let odds = (i..m / 2).map(|k| 2 * k + 1);
    Matching::from_edges(m, evens.chain(odds))
}

/// Inverse of [`path_matching_from_profile`]; `None` when `x` is not of that form.
pub fn profile_of_path_matching(m: usize, x: &Matching) -> Result<Option<PathProfile>> {
    if !m.is_multiple_of(2) {
        return Err(EdoError::OddPathLength(m));
    }
    if x.len() != m {
        return Err(EdoError::LengthMismatch {
            expected: m,
            found: x.len(),
        });
    }
    if x.count_ones() != m / 2 {
        return Ok(None);
    }
    let i = x.ones().take_while(|e| e % 2 == 0).count();
    let candidate = path_matching_from_profile(m, PathProfile(i))?;
    Ok((candidate == *x).then_some(PathProfile(i)))
}

/// Reusable scratch space for validity checks in hot loops.
#[derive(Debug, Clone)]
pub struct MatchingChecker {
    degree: Vec<u32>,
}

impl MatchingChecker {
    pub fn new(g: &Graph) -> Self {
        Self {
            degree: vec![0; g.n()],
        }
    }

    /// `col(x) = sum_v C(deg_x(v), 2)`. Assumes `x.len() == g.m()`.
    pub fn collisions(&mut self, g: &Graph, x: &Matching) -> u64 {
        match g.kind() {
            GraphKind::Path { .. } => adjacent_pairs(x),
            GraphKind::CompleteBipartite { .. } => {
                self.fill_degrees(g, x);
                let col = self
                    .degree
                    .iter()
                    .map(|&d| d as u64 * (d as u64).saturating_sub(1) / 2)
                    .sum();
                col
            }
        }
    }

    /// Collision-free and of maximum size. Assumes `x.len() == g.m()`.
    pub fn is_maximum(&mut self, g: &Graph, x: &Matching) -> bool {
        if x.count_ones() != g.max_matching_size() {
            return false;
        }
        self.is_valid(g, x)
    }

    /// Collision-free. Assumes `x.len() == g.m()`.
    pub fn is_valid(&mut self, g: &Graph, x: &Matching) -> bool {
        match g.kind() {
            GraphKind::Path { .. } => adjacent_pairs(x) == 0,
            GraphKind::CompleteBipartite { .. } => {
                self.degree.iter_mut().for_each(|d| *d = 0);
                for e in x.ones() {
                    let (u, v) = g.endpoints_unchecked(e);
                    self.degree[u] += 1;
                    self.degree[v] += 1;
                    if self.degree[u] > 1 || self.degree[v] > 1 {
                        return false;
                    }
                }
                true
            }
        }
    }

    fn fill_degrees(&mut self, g: &Graph, x: &Matching) {
        self.degree.iter_mut().for_each(|d| *d = 0);
        for e in x.ones() {
            let (u, v) = g.endpoints_unchecked(e);
            self.degree[u] += 1;
            self.degree[v] += 1;
        }
    }
}

/// On a path two selected edges collide iff they are consecutive.
fn adjacent_pairs(x: &Matching) -> u64 {
    let words = x.words();
    let mut total = 0u64;
    for (k, &w) in words.iter().enumerate() {
        let next_low = words.get(k + 1).map_or(0, |n| n & 1);
        let shifted = (w >> 1) | (next_low << (WORD - 1));
        total += (w & shifted).count_ones() as u64;
    }
    total
}
