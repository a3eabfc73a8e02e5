//! Exhaustive ground truth for small instances.
//!
//! Enumeration is by plain depth-first search over edge choices and diversity is
//! the direct pairwise Hamming sum, so nothing here shares code with the
//! profile codec or the bit-count diversity of [`crate::diversity`].

use crate::diversity::Population;
use crate::error::{EdoError, Result};
use crate::graph::{Graph, GraphKind};
use crate::matching::Matching;

/// Default bound on enumerated matchings and on candidate populations.
pub const DEFAULT_CAP: u128 = 1_000_000;

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Number of maximum matchings, computed before enumerating.
pub fn count_maximum_matchings(g: &Graph) -> u128 {
    match g.kind() {
        // Injective maps R -> L: |L|! / (|L| - |R|)!.
        GraphKind::CompleteBipartite { left, right } => {
            let mut acc: u128 = 1;
            for k in 0..right {
                acc = acc.saturating_mul((left - k) as u128);
            }
            acc
        }
        // ceil(m/2) pairwise non-adjacent edges out of m.
        GraphKind::Path { edges } => {
            let k = edges.div_ceil(2) as u128;
            binomial(edges as u128 - k + 1, k)
        }
    }
}

/// Every maximum matching of `g`, without duplicates, in lexicographic order of choices.
pub fn enumerate_maximum_matchings(g: &Graph, cap: u128) -> Result<Vec<Matching>> {
    let count = count_maximum_matchings(g);
    if count > cap {
        return Err(EdoError::TooManyCandidates { count, cap });
    }
    let mut out = Vec::with_capacity(count as usize);
    match g.kind() {
        GraphKind::CompleteBipartite { left, right } => {
            let mut used = vec![false; left];
            let mut current = Matching::zeros(g.m());
            assign_right(0, left, right, &mut used, &mut current, &mut out);
        }
        GraphKind::Path { edges } => {
            let mut current = Matching::zeros(edges);
            place_path_edges(0, edges.div_ceil(2), edges, &mut current, &mut out);
        }
    }
    debug_assert_eq!(out.len() as u128, count);
    Ok(out)
}

fn assign_right(
    j: usize,
    left: usize,
    right: usize,
    used: &mut [bool],
    current: &mut Matching,
    out: &mut Vec<Matching>,
) {
    if j == right {
        out.push(current.clone());
        return;
    }
    for i in 0..left {
        if used[i] {
            continue;
        }
        used[i] = true;
        current.set(i * right + j, true);
        assign_right(j + 1, left, right, used, current, out);
        current.set(i * right + j, false);
        used[i] = false;
    }
}

fn place_path_edges(
    from: usize,
    remaining: usize,
    edges: usize,
    current: &mut Matching,
    out: &mut Vec<Matching>,
) {
    if remaining == 0 {
        out.push(current.clone());
        return;
    }
    // Leave room for the remaining edges, each needing a gap of one.
    let mut e = from;
    while e + 2 * (remaining - 1) < edges {
        current.set(e, true);
        place_path_edges(e + 2, remaining - 1, edges, current, out);
        current.set(e, false);
        e += 1;
    }
}

/// Sum of Hamming distances over all pairs of a set of distinct matchings.
fn pairwise_diversity(members: &[&Matching]) -> u64 {
    let mut d = 0;
    for (a, x) in members.iter().enumerate() {
        for y in &members[a + 1..] {
            d += x.ones().filter(|&b| !y.get(b)).count() as u64
                + y.ones().filter(|&b| !x.get(b)).count() as u64;
        }
    }
    d
}

/// Candidate populations examined by [`visit_candidate_populations`].
///
/// On complete bipartite graphs every candidate contains the matching
/// `r_j -> l_j`: vertex relabelings act transitively on maximum matchings and
/// preserve Hamming distance, so this loses no optimum.
pub fn candidate_count(g: &Graph, mu: usize) -> u128 {
    let count = count_maximum_matchings(g);
    if mu == 0 || mu as u128 > count {
        return 0;
    }
    if g.is_bipartite() {
        binomial(count - 1, mu as u128 - 1)
    } else {
        binomial(count, mu as u128)
    }
}

/// Calls `visit(members, diversity)` for every `mu`-subset of distinct maximum
/// matchings (anchored on bipartite graphs, see [`candidate_count`]).
pub fn visit_candidate_populations(
    g: &Graph,
    mu: usize,
    cap: u128,
    mut visit: impl FnMut(&[&Matching], u64),
) -> Result<()> {
    if mu == 0 {
        return Err(EdoError::InvalidPopulation(
            "population size must be positive".into(),
        ));
    }
    let all = enumerate_maximum_matchings(g, cap)?;
    if mu > all.len() {
        return Err(EdoError::UnsupportedRegime(format!(
            "only {} distinct maximum matchings for mu = {mu}",
            all.len()
        )));
    }
    let candidates = candidate_count(g, mu);
    if candidates > cap {
        return Err(EdoError::TooManyCandidates {
            count: candidates,
            cap,
        });
    }

    let (fixed, pool): (Vec<&Matching>, Vec<&Matching>) = if g.is_bipartite() {
        let (_, right) = g.sides().expect("bipartite");
        let anchor = Matching::from_edges(g.m(), (0..right).map(|j| j * right + j))?;
        let pos = all
            .iter()
            .position(|x| *x == anchor)
            .expect("anchor is a maximum matching");
        (
            vec![&all[pos]],
            all.iter()
                .enumerate()
                .filter(|&(i, _)| i != pos)
                .map(|(_, x)| x)
                .collect(),
        )
    } else {
        (Vec::new(), all.iter().collect())
    };

    let k = mu - fixed.len();
    let mut idx: Vec<usize> = (0..k).collect();
    let mut members: Vec<&Matching> = Vec::with_capacity(mu);
    loop {
        members.clear();
        members.extend(fixed.iter().copied());
        members.extend(idx.iter().map(|&i| pool[i]));
        visit(&members, pairwise_diversity(&members));

        // Next combination in lexicographic order.
        let Some(pos) = (0..k).rev().find(|&p| idx[p] < pool.len() - k + p) else {
            break;
        };
        idx[pos] += 1;
        for p in pos + 1..k {
            idx[p] = idx[p - 1] + 1;
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct OracleOptimum {
    pub diversity: u64,
    /// First maximiser found.
    pub witness: Population,
    pub candidates: u128,
}

/// Exact maximum diversity over populations of `mu` distinct maximum matchings.
pub fn brute_force_optimal_diversity(g: &Graph, mu: usize, cap: u128) -> Result<OracleOptimum> {
    let mut best: Option<(u64, Vec<Matching>)> = None;
    let mut seen = 0u128;
    visit_candidate_populations(g, mu, cap, |members, d| {
        seen += 1;
        if best.as_ref().is_none_or(|(b, _)| d > *b) {
            best = Some((d, members.iter().map(|&x| x.clone()).collect()));
        }
    })?;
    let (diversity, witness) = best.expect("at least one candidate");
    Ok(OracleOptimum {
        diversity,
        witness: Population::from_members(g.m(), witness)?,
        candidates: seen,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diversity::canonical_optimal_path_population;
    use crate::matching::{is_maximum_matching, profile_of_path_matching};
    use std::collections::HashSet;

    #[test]
    fn path_counts() {
        assert_eq!(
            enumerate_maximum_matchings(&Graph::path(6).unwrap(), DEFAULT_CAP)
                .unwrap()
                .len(),
            4
        );
        let p5 = enumerate_maximum_matchings(&Graph::path(5).unwrap(), DEFAULT_CAP).unwrap();
        assert_eq!(p5, vec![Matching::from_edges(5, [0, 2, 4]).unwrap()]);
        for m in 1..=16 {
            let g = Graph::path(m).unwrap();
            let all = enumerate_maximum_matchings(&g, DEFAULT_CAP).unwrap();
            let expected = if m % 2 == 0 { m / 2 + 1 } else { 1 };
            assert_eq!(all.len(), expected, "m={m}");
            assert_eq!(count_maximum_matchings(&g), expected as u128);
            assert_eq!(all.iter().collect::<HashSet<_>>().len(), all.len());
            for x in &all {
                assert!(is_maximum_matching(&g, x).unwrap());
                if m % 2 == 0 {
                    assert!(profile_of_path_matching(m, x).unwrap().is_some());
                }
            }
        }
    }

    #[test]
    fn bipartite_counts() {
        let g = Graph::complete_bipartite(3, 2).unwrap();
        let all = enumerate_maximum_matchings(&g, DEFAULT_CAP).unwrap();
        assert_eq!(all.len(), 6);
        assert_eq!(all.iter().collect::<HashSet<_>>().len(), 6);
        assert!(all.iter().all(|x| is_maximum_matching(&g, x).unwrap()));
        assert_eq!(
            count_maximum_matchings(&Graph::complete_bipartite(8, 5).unwrap()),
            6720
        );
    }

    #[test]
    fn cap_is_enforced() {
        let g = Graph::complete_bipartite(10, 6).unwrap();
        assert!(matches!(
            enumerate_maximum_matchings(&g, 1000),
            Err(EdoError::TooManyCandidates {
                count: 151_200,
                cap: 1000
            })
        ));
        let g = Graph::path(40).unwrap();
        assert!(matches!(
            brute_force_optimal_diversity(&g, 10, 1000),
            Err(EdoError::TooManyCandidates { .. })
        ));
        assert!(brute_force_optimal_diversity(&Graph::path(6).unwrap(), 5, DEFAULT_CAP).is_err());
    }

    #[test]
    fn brute_force_examples() {
        let b = brute_force_optimal_diversity(
            &Graph::complete_bipartite(6, 5).unwrap(),
            2,
            DEFAULT_CAP,
        )
        .unwrap();
        assert_eq!(b.diversity, 10);
        assert!(b.witness.pairwise_edge_disjoint());

        let p = brute_force_optimal_diversity(&Graph::path(6).unwrap(), 4, DEFAULT_CAP).unwrap();
        assert_eq!((p.diversity, p.candidates), (20, 1));

        let p = brute_force_optimal_diversity(&Graph::path(6).unwrap(), 2, DEFAULT_CAP).unwrap();
        assert_eq!(p.diversity, 6);
        let profiles: HashSet<usize> = p
            .witness
            .members()
            .iter()
            .map(|x| profile_of_path_matching(6, x).unwrap().unwrap().0)
            .collect();
        assert_eq!(profiles, HashSet::from([0, 3]));
    }

    #[test]
    fn anchoring_matches_full_search() {
        // Small enough to search without the anchor.
        let g = Graph::complete_bipartite(4, 3).unwrap();
        let all = enumerate_maximum_matchings(&g, DEFAULT_CAP).unwrap();
        for mu in 1..=3 {
            let mut best = 0;
            let n = all.len();
            let mut idx: Vec<usize> = (0..mu).collect();
            loop {
                let members: Vec<&Matching> = idx.iter().map(|&i| &all[i]).collect();
                best = best.max(pairwise_diversity(&members));
                let Some(pos) = (0..mu).rev().find(|&p| idx[p] < n - mu + p) else {
                    break;
                };
                idx[pos] += 1;
                for p in pos + 1..mu {
                    idx[p] = idx[p - 1] + 1;
                }
            }
            let anchored = brute_force_optimal_diversity(&g, mu, DEFAULT_CAP).unwrap();
            assert_eq!(anchored.diversity, best, "mu={mu}");
        }
    }

    #[test]
    fn canonical_path_population_is_optimal() {
        for m in (2..=12).step_by(2) {
            let g = Graph::path(m).unwrap();
            for mu in 1..=m / 2 + 1 {
                let oracle = brute_force_optimal_diversity(&g, mu, DEFAULT_CAP).unwrap();
                let canonical = canonical_optimal_path_population(m, mu).unwrap();
                assert_eq!(canonical.diversity(), oracle.diversity, "m={m} mu={mu}");
            }
        }
    }

    /// Adding a duplicate to an optimal set of distinct matchings never beats
    /// the best set of distinct matchings of the larger size.
    #[test]
    fn duplicates_never_help() {
        let m = 6;
        let g = Graph::path(m).unwrap();
        let all = enumerate_maximum_matchings(&g, DEFAULT_CAP).unwrap();
        for mu in 2..=4 {
            let best = brute_force_optimal_diversity(&g, mu, DEFAULT_CAP)
                .unwrap()
                .diversity;
            // Every multiset of size mu over the four matchings.
            let mut counts = vec![0usize; all.len()];
            fn rec(i: usize, left: usize, counts: &mut Vec<usize>, all: &[Matching], best: u64) {
                if i == all.len() {
                    if left == 0 {
                        let members = counts
                            .iter()
                            .zip(all)
                            .flat_map(|(&c, x)| std::iter::repeat_n(x.clone(), c));
                        let p = Population::from_members(6, members).unwrap();
                        assert!(p.diversity() <= best);
                    }
                    return;
                }
                for c in 0..=left {
                    counts[i] = c;
                    rec(i + 1, left - c, counts, all, best);
                }
                counts[i] = 0;
            }
            rec(0, mu, &mut counts, &all, best);
        }
    }
}
