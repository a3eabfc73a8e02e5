//! Initial populations.

use crate::diversity::Population;
use crate::error::{EdoError, Result};
use crate::graph::Graph;
use crate::matching::Matching;

fn require_positive(mu: usize) -> Result<()> {
    if mu == 0 {
        Err(EdoError::InvalidPopulation(
            "population size must be positive".into(),
        ))
    } else {
        Ok(())
    }
}

/// `mu` copies of the matching `r_i -> l_i` for `0 <= i < |R|`.
pub fn homogeneous_bipartite_population(g: &Graph, mu: usize) -> Result<Population> {
    require_positive(mu)?;
    let (_, right) = g.sides().ok_or(EdoError::WrongFamily {
        expected: "complete bipartite",
    })?;
    let x = Matching::from_edges(g.m(), (0..right).map(|i| i * right + i))?;
    Population::from_members(g.m(), std::iter::repeat_n(x, mu))
}

/// `mu` copies of the matching made of every even-indexed edge.
pub fn all_even_path_population(g: &Graph, mu: usize) -> Result<Population> {
    require_positive(mu)?;
    if !g.is_path() {
        return Err(EdoError::WrongFamily { expected: "path" });
    }
    let x = Matching::from_edges(g.m(), (0..g.m()).step_by(2))?;
    Population::from_members(g.m(), std::iter::repeat_n(x, mu))
}

/// Row-by-row assignment `r_j -> l_{rows[i][j]}` of the adversarial population.
///
/// Columns `1..|R|` of row `i` hold the cyclic sequence `l_0 .. l_{|R|-2}`
/// shifted right by `i`. Column 0 of the first `min(mu, gap + 2)` rows takes
/// `l_{|L|-1}, l_{|L|-1}, l_{|L|-2}, ...` from the tail of `L`, so rows 0 and 1
/// share exactly one edge and every vertex left free by row 0 or row 1 is
/// already matched to `r_0` by some other row. Any further row `i` takes
/// `l_{(2i-1) mod (|R|-1)}` in column 0 and gives up that vertex in column `i`
/// for `l_{|R|-1}`, which keeps every remaining edge unique.
pub fn adversarial_rotation_assignment(g: &Graph, mu: usize) -> Result<Vec<Vec<usize>>> {
    let (left, right) = g.sides().ok_or(EdoError::WrongFamily {
        expected: "complete bipartite",
    })?;
    if 2 * mu >= right {
        return Err(EdoError::UnsupportedRegime(format!(
            "adversarial population needs mu < |R|/2 (mu = {mu}, |R| = {right})"
        )));
    }
    let gap = left - right;
    if mu < gap {
        return Err(EdoError::UnsupportedRegime(format!(
            "adversarial population needs mu >= |L| - |R| (mu = {mu}, gap = {gap})"
        )));
    }
    if mu < 2 {
        return Err(EdoError::UnsupportedRegime(
            "adversarial population needs at least two members".into(),
        ));
    }
    let cycle = right - 1;
    let core = mu.min(gap + 2);
    let rows = (0..mu)
        .map(|i| {
            let mut row: Vec<usize> = (0..right)
                .map(|j| if j == 0 { 0 } else { (j - 1 + i) % cycle })
                .collect();
            if i < core {
                row[0] = left - 1 - i.saturating_sub(1);
            } else {
                row[0] = (2 * i - 1) % cycle;
                row[i] = right - 1;
            }
            row
        })
        .collect();
    Ok(rows)
}

/// Population in which exactly one edge is shared by exactly two members, a
/// diversity deficit of 2 with no improving single reassignment for the two
/// members that share it (when `mu >= |L| - |R| + 2`).
pub fn adversarial_rotation_population(g: &Graph, mu: usize) -> Result<Population> {
    let rows = adversarial_rotation_assignment(g, mu)?;
    let members = rows
        .iter()
        .map(|row| {
            Matching::from_edges(
                g.m(),
                row.iter()
                    .enumerate()
                    .map(|(j, &i)| g.bipartite_edge(i, j).expect("assignment in range")),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Population::from_members(g.m(), members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diversity::optimal_diversity;
    use crate::matching::is_maximum_matching;
    use std::collections::BTreeMap;

    #[test]
    fn homogeneous_bipartite() {
        let g = Graph::complete_bipartite(3, 2).unwrap();
        let p = homogeneous_bipartite_population(&g, 2).unwrap();
        let expected = Matching::from_edges(
            6,
            [
                g.bipartite_edge(0, 0).unwrap(),
                g.bipartite_edge(1, 1).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(p.members(), &[expected.clone(), expected]);
        assert_eq!(p.diversity(), 0);
        for mu in 1..6 {
            let g = Graph::complete_bipartite(9, 7).unwrap();
            let p = homogeneous_bipartite_population(&g, mu).unwrap();
            assert_eq!((p.len(), p.diversity()), (mu, 0));
            assert!(p
                .members()
                .iter()
                .all(|x| is_maximum_matching(&g, x).unwrap()));
        }
        assert!(homogeneous_bipartite_population(&Graph::path(4).unwrap(), 2).is_err());
        assert!(homogeneous_bipartite_population(&g, 0).is_err());
    }

    #[test]
    fn even_path() {
        let g = Graph::path(6).unwrap();
        let p = all_even_path_population(&g, 3).unwrap();
        let x = Matching::from_edges(6, [0, 2, 4]).unwrap();
        assert_eq!(p.members(), &[x.clone(), x.clone(), x]);
        let g5 = Graph::path(5).unwrap();
        let p5 = all_even_path_population(&g5, 2).unwrap();
        assert_eq!(p5.members()[0], Matching::from_edges(5, [0, 2, 4]).unwrap());
        assert!(is_maximum_matching(&g5, &p5.members()[0]).unwrap());
        assert_eq!(p5.diversity(), 0);
        assert!(all_even_path_population(&Graph::complete_bipartite(3, 3).unwrap(), 1).is_err());
    }

    fn multiplicity_histogram(p: &Population) -> BTreeMap<usize, usize> {
        let mut counts = vec![0usize; p.edges()];
        for x in p.members() {
            for b in x.ones() {
                counts[b] += 1;
            }
        }
        let mut hist = BTreeMap::new();
        for c in counts.into_iter().filter(|&c| c > 0) {
            *hist.entry(c).or_default() += 1;
        }
        hist
    }

    /// Row 0 and row 1 cannot move `r_0` to a free vertex without reusing an edge.
    fn shared_rows_are_stuck(g: &Graph, rows: &[Vec<usize>]) -> bool {
        let (left, _) = g.sides().unwrap();
        let col0: Vec<usize> = rows.iter().map(|r| r[0]).collect();
        rows[..2].iter().all(|row| {
            (0..left)
                .filter(|l| !row.contains(l))
                .all(|free| col0[2..].contains(&free))
        })
    }

    #[test]
    fn adversarial_properties_small_sizes() {
        let mut checked = 0;
        for right in 3..=15 {
            for left in right..=right + 8 {
                let g = Graph::complete_bipartite(left, right).unwrap();
                for mu in 1..=right {
                    let admissible = 2 * mu < right && mu >= left - right && mu >= 2;
                    let p = adversarial_rotation_population(&g, mu);
                    assert_eq!(p.is_ok(), admissible, "({left},{right},{mu})");
                    let Ok(p) = p else { continue };
                    checked += 1;
                    assert_eq!(p.len(), mu);
                    assert_eq!(p.unique_count(), mu);
                    assert!(p
                        .members()
                        .iter()
                        .all(|x| is_maximum_matching(&g, x).unwrap()));
                    let opt = optimal_diversity(&g, mu).unwrap();
                    assert_eq!(opt - p.diversity(), 2, "({left},{right},{mu})");
                    let hist = multiplicity_histogram(&p);
                    assert_eq!(hist, BTreeMap::from([(1, mu * right - 2), (2, 1)]));
                    let rows = adversarial_rotation_assignment(&g, mu).unwrap();
                    if mu >= left - right + 2 {
                        assert!(shared_rows_are_stuck(&g, &rows), "({left},{right},{mu})");
                    }
                }
            }
        }
        assert!(checked > 50);
    }

    #[test]
    fn adversarial_first_column_uses_tail() {
        let g = Graph::complete_bipartite(12, 11).unwrap();
        let rows = adversarial_rotation_assignment(&g, 5).unwrap();
        assert_eq!(
            &rows.iter().map(|r| r[0]).collect::<Vec<_>>()[..3],
            &[11, 11, 10]
        );
        assert_eq!(&rows[0][1..], &(0..10).collect::<Vec<_>>()[..]);
        assert_eq!(rows[1][1..3], [1, 2]);
    }

    #[test]
    fn adversarial_rejects_bad_regimes() {
        let g = Graph::complete_bipartite(8, 7).unwrap();
        assert!(adversarial_rotation_population(&g, 4).is_err());
        let g = Graph::complete_bipartite(20, 11).unwrap();
        assert!(adversarial_rotation_population(&g, 3).is_err());
        assert!(adversarial_rotation_population(&Graph::path(8).unwrap(), 2).is_err());
    }
}
