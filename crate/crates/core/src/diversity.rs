//! Populations and the total-Hamming-distance diversity measure.
//!
//! Diversity is the sum of Hamming distances over *unordered* pairs of distinct
//! solutions in the deduplicated population. With `k_b` the number of distinct
//! members that select edge `b` and `u` the number of distinct members,
//! `D(P) = sum_b k_b * (u - k_b)`.
//!
//! A population keeps `k_b` up to date across insertions and removals so that
//! `D(P)` is O(1) to read and any member's contribution is
//! `K + u*|x| - 2 * sum_{b in x} k_b` with `K = sum_b k_b`.

use serde::Serialize;

use crate::error::{EdoError, Result};
use crate::graph::Graph;
use crate::matching::{path_matching_from_profile, Matching, PathProfile};

/// Ordered multiset of matchings over a fixed edge count.
#[derive(Debug, Clone)]
pub struct Population {
    edges: usize,
    members: Vec<Matching>,
    /// Equality class of each member, indexing `class_size`.
    class_of: Vec<usize>,
    /// Members per class; zero marks a free slot.
    class_size: Vec<u32>,
    bit_counts: Vec<u32>,
    unique_count: usize,
    total_ones: u64,
    diversity: u64,
}

impl PartialEq for Population {
    fn eq(&self, other: &Self) -> bool {
        self.edges == other.edges && self.members == other.members
    }
}

impl Eq for Population {}

impl Serialize for Population {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        self.members.serialize(serializer)
    }
}

impl Population {
    pub fn new(edges: usize) -> Self {
        Self {
            edges,
            members: Vec::new(),
            class_of: Vec::new(),
            class_size: Vec::new(),
            bit_counts: vec![0; edges],
            unique_count: 0,
            total_ones: 0,
            diversity: 0,
        }
    }

    pub fn from_members(edges: usize, members: impl IntoIterator<Item = Matching>) -> Result<Self> {
        let mut p = Self::new(edges);
        for x in members {
            p.push(x)?;
        }
        Ok(p)
    }

    /// Parses a list of hex bitstrings (see [`Matching::to_hex`]).
    pub fn from_hex<S: AsRef<str>>(edges: usize, members: &[S]) -> Result<Self> {
        let decoded = members
            .iter()
            .map(|s| Matching::from_hex(edges, s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_members(edges, decoded)
    }

    pub fn to_hex(&self) -> Vec<String> {
        self.members.iter().map(Matching::to_hex).collect()
    }

    pub fn edges(&self) -> usize {
        self.edges
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Matching] {
        &self.members
    }

    pub fn member(&self, idx: usize) -> Result<&Matching> {
        self.members.get(idx).ok_or(EdoError::MemberOutOfRange {
            index: idx,
            len: self.members.len(),
        })
    }

    /// Size of the deduplicated member set.
    pub fn unique_count(&self) -> usize {
        self.unique_count
    }

    /// `k_b` for every edge `b`, over distinct members.
    pub fn bit_counts(&self) -> &[u32] {
        &self.bit_counts
    }

    /// `D(P)`.
    pub fn diversity(&self) -> u64 {
        self.diversity
    }

    pub fn multiplicity(&self, x: &Matching) -> usize {
        self.members.iter().filter(|y| *y == x).count()
    }

    pub fn push(&mut self, x: Matching) -> Result<()> {
        if x.len() != self.edges {
            return Err(EdoError::LengthMismatch {
                expected: self.edges,
                found: x.len(),
            });
        }
        self.push_unchecked(x);
        Ok(())
    }

    pub(crate) fn push_unchecked(&mut self, x: Matching) {
        debug_assert_eq!(x.len(), self.edges);
        let class = match self.members.iter().position(|y| *y == x) {
            Some(i) => self.class_of[i],
            None => self.open_class(&x),
        };
        self.class_size[class] += 1;
        self.class_of.push(class);
        self.members.push(x);
    }

    /// Appends a copy of the member at `idx`, reusing the allocation of `buffer`.
    pub(crate) fn push_copy(&mut self, idx: usize, mut buffer: Matching) {
        buffer.copy_from(&self.members[idx]);
        let class = self.class_of[idx];
        self.class_size[class] += 1;
        self.class_of.push(class);
        self.members.push(buffer);
    }

    fn open_class(&mut self, x: &Matching) -> usize {
        self.diversity += self.distance_sum_to_distinct(x);
        for b in x.ones() {
            self.bit_counts[b] += 1;
        }
        self.total_ones += x.count_ones() as u64;
        self.unique_count += 1;
        match self.class_size.iter().position(|&c| c == 0) {
            Some(slot) => slot,
            None => {
                self.class_size.push(0);
                self.class_size.len() - 1
            }
        }
    }

    /// Removes and returns the member at `idx`, preserving the order of the rest.
    pub fn remove(&mut self, idx: usize) -> Result<Matching> {
        if idx >= self.members.len() {
            return Err(EdoError::MemberOutOfRange {
                index: idx,
                len: self.members.len(),
            });
        }
        let x = self.members.remove(idx);
        let class = self.class_of.remove(idx);
        self.class_size[class] -= 1;
        if self.class_size[class] == 0 {
            for b in x.ones() {
                self.bit_counts[b] -= 1;
            }
            self.total_ones -= x.count_ones() as u64;
            self.unique_count -= 1;
            self.diversity -= self.distance_sum_to_distinct(&x);
        }
        Ok(x)
    }

    /// `sum_y H(x, y)` over distinct members `y != x`, valid whether or not `x`
    /// itself is counted in `bit_counts`.
    #[inline]
    fn distance_sum_to_distinct(&self, x: &Matching) -> u64 {
        let overlap: u64 = x.ones().map(|b| self.bit_counts[b] as u64).sum();
        let ones = x.count_ones() as u64;
        self.total_ones + self.unique_count as u64 * ones - 2 * overlap
    }

    /// `c(x) = D(P) - D(P \ {x})` for the member at `idx`.
    pub fn contribution(&self, idx: usize) -> Result<u64> {
        let x = self.member(idx)?;
        Ok(if self.is_duplicated(idx) {
            0
        } else {
            self.distance_sum_to_distinct(x)
        })
    }

    #[inline]
    fn is_duplicated(&self, idx: usize) -> bool {
        self.class_size[self.class_of[idx]] > 1
    }

    /// Contributions of all members, in order.
    pub fn contributions(&self) -> Vec<u64> {
        (0..self.members.len())
            .map(|i| self.contribution(i).expect("index in range"))
            .collect()
    }

    /// Indices of all members attaining the minimum contribution.
    ///
    /// Duplicated members contribute 0 and, once at least two distinct members
    /// exist, every other member contributes a positive amount; so whenever a
    /// duplicate exists the minimisers are exactly the duplicated members and no
    /// distance sums are needed.
    pub fn min_contribution_members(&self, out: &mut Vec<usize>) {
        out.clear();
        out.extend((0..self.members.len()).filter(|&i| self.is_duplicated(i)));
        if !out.is_empty() {
            return;
        }
        let mut best = u64::MAX;
        for (i, x) in self.members.iter().enumerate() {
            let c = self.distance_sum_to_distinct(x);
            if c < best {
                best = c;
                out.clear();
            }
            if c == best {
                out.push(i);
            }
        }
    }

    /// True iff no edge is selected by two members; copies of a non-empty
    /// matching share all of its edges.
    pub fn pairwise_edge_disjoint(&self) -> bool {
        if !self.bit_counts.iter().all(|&k| k <= 1) {
            return false;
        }
        (0..self.members.len()).all(|i| self.members[i].count_ones() == 0 || !self.is_duplicated(i))
    }

    /// Recomputes every cached quantity from scratch and reports the first mismatch.
    pub fn audit(&self) -> Result<()> {
        let mut distinct: Vec<&Matching> = Vec::new();
        for x in &self.members {
            if !distinct.contains(&x) {
                distinct.push(x);
            }
        }
        let mut counts = vec![0u32; self.edges];
        for x in &distinct {
            for b in x.ones() {
                counts[b] += 1;
            }
        }
        let u = distinct.len() as u64;
        let from_counts: u64 = counts.iter().map(|&k| k as u64 * (u - k as u64)).sum();
        let mut pairwise = 0u64;
        for (a, x) in distinct.iter().enumerate() {
            for y in &distinct[a + 1..] {
                pairwise += x.hamming_unchecked(y);
            }
        }
        let fail = |what: &str| Err(EdoError::InvalidPopulation(format!("audit: {what}")));
        if distinct.len() != self.unique_count {
            return fail("unique count");
        }
        if counts != self.bit_counts {
            return fail("bit counts");
        }
        if from_counts != pairwise || pairwise != self.diversity {
            return fail("diversity");
        }
        if counts.iter().map(|&k| k as u64).sum::<u64>() != self.total_ones {
            return fail("total ones");
        }
        for (i, x) in self.members.iter().enumerate() {
            if self.class_size[self.class_of[i]] as usize != self.multiplicity(x) {
                return fail("multiplicities");
            }
            for (j, y) in self.members.iter().enumerate() {
                if (self.class_of[i] == self.class_of[j]) != (x == y) {
                    return fail("equality classes");
                }
            }
        }
        Ok(())
    }
}

pub fn population_diversity(p: &Population) -> u64 {
    p.diversity()
}

pub fn contribution(p: &Population, idx: usize) -> Result<u64> {
    p.contribution(idx)
}

pub fn pairwise_edge_disjoint(p: &Population) -> bool {
    p.pairwise_edge_disjoint()
}

/// Largest attainable diversity for `mu` maximum matchings of `g`.
///
/// Only defined where it is characterised exactly: bipartite graphs with
/// `mu < |R| / 2`, odd paths, and even paths with `mu <= m/2 + 1`.
pub fn optimal_diversity(g: &Graph, mu: usize) -> Result<u64> {
    if mu == 0 {
        return Err(EdoError::InvalidPopulation(
            "population size must be positive".into(),
        ));
    }
    if let Some((_, right)) = g.sides() {
        if 2 * mu >= right {
            return Err(EdoError::UnsupportedRegime(format!(
                "bipartite optimum requires mu < |R|/2 (mu = {mu}, |R| = {right})"
            )));
        }
        let (mu, right) = (mu as u64, right as u64);
        return Ok(mu * (mu - 1) * right);
    }
    let m = g.m();
    if m % 2 == 1 || mu == 1 {
        return Ok(0);
    }
    if mu > m / 2 + 1 {
        return Err(EdoError::UnsupportedRegime(format!(
            "path with {m} edges has only {} maximum matchings (mu = {mu})",
            m / 2 + 1
        )));
    }
    Ok(canonical_optimal_path_population(m, mu)?.diversity())
}

/// The maximum-diversity population on an even path: profiles `j` and `m/2 - j`
/// for `j < mu/2`, plus profile `mu/2` when `mu` is odd.
pub fn canonical_optimal_path_population(m: usize, mu: usize) -> Result<Population> {
    if !m.is_multiple_of(2) {
        return Err(EdoError::OddPathLength(m));
    }
    if mu == 0 || mu > m / 2 + 1 {
        return Err(EdoError::UnsupportedRegime(format!(
            "mu must lie in 1..={} for a path with {m} edges (got {mu})",
            m / 2 + 1
        )));
    }
    let half = m / 2;
    let mut profiles = Vec::with_capacity(mu);
    for j in 0..mu / 2 {
        profiles.push(j);
        profiles.push(half - j);
    }
    if mu % 2 == 1 {
        profiles.push(mu / 2);
    }
    Population::from_members(
        m,
        profiles
            .into_iter()
            .map(|i| path_matching_from_profile(m, PathProfile(i)))
            .collect::<Result<Vec<_>>>()?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::{is_maximum_matching, profile_of_path_matching};
    use proptest::prelude::*;

    fn profile(m: usize, i: usize) -> Matching {
        path_matching_from_profile(m, PathProfile(i)).unwrap()
    }

    fn disjoint_bipartite(g: &Graph, count: usize) -> Vec<Matching> {
        let (_, right) = g.sides().unwrap();
        (0..count)
            .map(|s| {
                Matching::from_edges(
                    g.m(),
                    (0..right).map(|j| g.bipartite_edge(j + s * right, j).unwrap()),
                )
                .unwrap()
            })
            .collect()
    }

    #[test]
    fn duplicate_pair_has_zero_diversity() {
        let x = profile(6, 1);
        let p = Population::from_members(6, [x.clone(), x]).unwrap();
        assert_eq!(p.diversity(), 0);
        assert_eq!(p.unique_count(), 1);
        assert_eq!(p.contribution(0).unwrap(), 0);
        assert_eq!(p.contribution(1).unwrap(), 0);
    }

    #[test]
    fn extreme_path_profiles() {
        let p = Population::from_members(6, [profile(6, 0), profile(6, 3)]).unwrap();
        assert_eq!(p.diversity(), 6);
        assert_eq!(p.contribution(0).unwrap(), 6);
    }

    #[test]
    fn disjoint_bipartite_triple() {
        let g = Graph::complete_bipartite(15, 5).unwrap();
        let p = Population::from_members(g.m(), disjoint_bipartite(&g, 3)).unwrap();
        assert_eq!(p.diversity(), 30);
        assert!(p.pairwise_edge_disjoint());
        for i in 0..3 {
            assert_eq!(p.contribution(i).unwrap(), 20);
        }
    }

    #[test]
    fn contribution_of_two_distinct() {
        let (x, y) = (profile(8, 1), profile(8, 3));
        let p = Population::from_members(8, [x.clone(), y.clone()]).unwrap();
        assert_eq!(p.contribution(0).unwrap(), x.hamming_unchecked(&y));
        assert!(p.contribution(2).is_err());
    }

    #[test]
    fn shifted_bipartite_matchings_are_disjoint() {
        let g = Graph::complete_bipartite(10, 5).unwrap();
        let p = Population::from_members(g.m(), disjoint_bipartite(&g, 2)).unwrap();
        assert!(p.pairwise_edge_disjoint());
        let x = p.members()[0].clone();
        let q = Population::from_members(g.m(), [x.clone(), x]).unwrap();
        assert!(!q.pairwise_edge_disjoint());
        let single = Population::from_members(g.m(), disjoint_bipartite(&g, 1)).unwrap();
        assert!(single.pairwise_edge_disjoint());
    }

    #[test]
    fn optimal_diversity_examples() {
        let b = Graph::complete_bipartite(12, 5).unwrap();
        assert_eq!(optimal_diversity(&b, 2).unwrap(), 10);
        assert!(matches!(
            optimal_diversity(&b, 3),
            Err(EdoError::UnsupportedRegime(_))
        ));
        let p6 = Graph::path(6).unwrap();
        assert_eq!(optimal_diversity(&p6, 4).unwrap(), 20);
        assert_eq!(optimal_diversity(&p6, 2).unwrap(), 6);
        assert!(matches!(
            optimal_diversity(&p6, 5),
            Err(EdoError::UnsupportedRegime(_))
        ));
        let p5 = Graph::path(5).unwrap();
        assert_eq!(optimal_diversity(&p5, 1).unwrap(), 0);
        assert_eq!(optimal_diversity(&p5, 7).unwrap(), 0);
        assert_eq!(optimal_diversity(&p6, 1).unwrap(), 0);
    }

    #[test]
    fn canonical_path_population_profiles() {
        let profiles = |mu| -> Vec<usize> {
            canonical_optimal_path_population(6, mu)
                .unwrap()
                .members()
                .iter()
                .map(|x| profile_of_path_matching(6, x).unwrap().unwrap().0)
                .collect()
        };
        assert_eq!(profiles(2), vec![0, 3]);
        assert_eq!(profiles(3), vec![0, 3, 1]);
        assert_eq!(profiles(4), vec![0, 3, 1, 2]);
        assert_eq!(
            canonical_optimal_path_population(6, 4).unwrap().diversity(),
            20
        );
        assert!(canonical_optimal_path_population(5, 2).is_err());
        assert!(canonical_optimal_path_population(6, 5).is_err());
        assert!(canonical_optimal_path_population(6, 0).is_err());

        let g = Graph::path(12).unwrap();
        for mu in 1..=7 {
            let p = canonical_optimal_path_population(12, mu).unwrap();
            assert_eq!(p.unique_count(), mu);
            assert!(p
                .members()
                .iter()
                .all(|x| is_maximum_matching(&g, x).unwrap()));
        }
    }

    /// Every admissible odd-mu representative gives the same diversity.
    #[test]
    fn odd_representative_choice_is_immaterial() {
        for m in (4..=16).step_by(2) {
            for mu in (3..=m / 2 + 1).step_by(2) {
                let t = mu / 2;
                let base = canonical_optimal_path_population(m, mu)
                    .unwrap()
                    .diversity();
                for k in t..=m / 2 - t {
                    let mut members: Vec<Matching> = (0..t)
                        .flat_map(|j| [profile(m, j), profile(m, m / 2 - j)])
                        .collect();
                    members.push(profile(m, k));
                    let p = Population::from_members(m, members).unwrap();
                    assert_eq!(p.diversity(), base, "m={m} mu={mu} k={k}");
                }
            }
        }
    }

    fn arb_population() -> impl Strategy<Value = Population> {
        (1usize..90, 1usize..7).prop_flat_map(|(m, mu)| {
            // A small alphabet of base strings forces duplicates regularly.
            let base = proptest::collection::vec(proptest::collection::vec(any::<bool>(), m), 1..4);
            (
                base,
                proptest::collection::vec((0usize..8, any::<u64>()), mu),
            )
                .prop_map(move |(base, picks)| {
                    let members = picks.into_iter().map(|(pick, salt)| {
                        let bits = &base[pick % base.len()];
                        let mut x = Matching::from_edges(m, (0..m).filter(|&i| bits[i])).unwrap();
                        if pick >= 4 {
                            x.flip((salt as usize) % m);
                        }
                        x
                    });
                    Population::from_members(m, members.collect::<Vec<_>>()).unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn bit_count_diversity_matches_pairwise(p in arb_population()) {
            prop_assert!(p.audit().is_ok());
        }

        #[test]
        fn contribution_is_exact_removal_delta(p in arb_population()) {
            for i in 0..p.len() {
                let mut q = p.clone();
                q.remove(i).unwrap();
                prop_assert!(q.audit().is_ok());
                prop_assert_eq!(p.contribution(i).unwrap(), p.diversity() - q.diversity());
                if p.multiplicity(&p.members()[i]) > 1 {
                    prop_assert_eq!(p.contribution(i).unwrap(), 0);
                }
            }
            let c = p.contributions();
            let min = *c.iter().min().unwrap();
            let expected: Vec<usize> = (0..p.len()).filter(|&i| c[i] == min).collect();
            let mut got = Vec::new();
            p.min_contribution_members(&mut got);
            prop_assert_eq!(got, expected);
        }
    }
}
