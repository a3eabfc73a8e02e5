//! Experiment specifications and their expansion into sweep points.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use edo_core::{seeds, Algorithm, Graph, Population};
use serde::{Deserialize, Serialize};

use crate::HarnessError;

pub const DEFAULT_REPETITIONS: u32 = 30;
pub const DEFAULT_MAX_ITERATIONS: u64 = 1_000_000_000;

/// Instance family; the bipartite families differ in how `|L| - |R|` is held.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `|L| - |R| = 1`.
    BipartiteSmallGap,
    /// `|L| - |R| = mu + 1`.
    BipartiteBigGap,
    Path,
}

impl Family {
    pub const ALL: [Family; 3] = [
        Family::BipartiteSmallGap,
        Family::BipartiteBigGap,
        Family::Path,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Family::BipartiteSmallGap => "bipartite_small_gap",
            Family::BipartiteBigGap => "bipartite_big_gap",
            Family::Path => "path",
        }
    }

    pub fn is_bipartite(&self) -> bool {
        !matches!(self, Family::Path)
    }

    /// The gap `|L| - |R|` this family holds fixed in an m-sweep at population size `mu`.
    pub fn gap(&self, mu: usize) -> Option<usize> {
        match self {
            Family::BipartiteSmallGap => Some(1),
            Family::BipartiteBigGap => Some(mu + 1),
            Family::Path => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| HarnessError::Spec(format!("unknown family {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    /// Values are `|R|` (bipartite) or `m` (path); `mu` is fixed.
    VaryMFixedMu,
    /// Values are `mu`; the graph is fixed.
    VaryMuFixedM,
}

impl FromStr for SweepAxis {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "vary_m_fixed_mu" | "m" => Ok(SweepAxis::VaryMFixedMu),
            "vary_mu_fixed_m" | "mu" => Ok(SweepAxis::VaryMuFixedM),
            _ => Err(HarnessError::Spec(format!("unknown sweep axis {s:?}"))),
        }
    }
}

/// A parameter sweep, as read from a JSON spec file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub family: Family,
    pub algorithms: Vec<Algorithm>,
    pub axis: SweepAxis,
    pub values: Vec<usize>,
    /// Population size of an m-sweep.
    #[serde(default)]
    pub mu: Option<usize>,
    /// Fixed bipartite sides of a mu-sweep.
    #[serde(default)]
    pub left: Option<usize>,
    #[serde(default)]
    pub right: Option<usize>,
    /// Fixed path length of a mu-sweep.
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default = "default_repetitions")]
    pub repetitions: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

fn default_repetitions() -> u32 {
    DEFAULT_REPETITIONS
}

fn default_max_iterations() -> u64 {
    DEFAULT_MAX_ITERATIONS
}

/// One (graph, mu) configuration of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SweepPoint {
    pub family: Family,
    pub left: usize,
    pub right: usize,
    pub m: usize,
    pub mu: usize,
}

impl SweepPoint {
    pub fn bipartite(family: Family, left: usize, right: usize, mu: usize) -> Self {
        Self {
            family,
            left,
            right,
            m: left * right,
            mu,
        }
    }

    pub fn path(m: usize, mu: usize) -> Self {
        Self {
            family: Family::Path,
            left: 0,
            right: 0,
            m,
            mu,
        }
    }

    pub fn graph(&self) -> Result<Graph, HarnessError> {
        Ok(if self.family.is_bipartite() {
            Graph::complete_bipartite(self.left, self.right)?
        } else {
            Graph::path(self.m)?
        })
    }

    /// The homogeneous start: `mu` copies of one maximum matching.
    pub fn initial_population(&self) -> Result<Population, HarnessError> {
        let g = self.graph()?;
        Ok(if g.is_bipartite() {
            seeds::homogeneous_bipartite_population(&g, self.mu)?
        } else {
            seeds::all_even_path_population(&g, self.mu)?
        })
    }
}

impl fmt::Display for SweepPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.family.is_bipartite() {
            write!(
                f,
                "{} K({},{}) mu={}",
                self.family, self.left, self.right, self.mu
            )
        } else {
            write!(f, "path P({}) mu={}", self.m, self.mu)
        }
    }
}

impl ExperimentSpec {
    /// An m-sweep at fixed `mu` with default repetitions, seed and budget.
    pub fn vary_m(family: Family, algorithms: &[Algorithm], values: &[usize], mu: usize) -> Self {
        Self {
            family,
            algorithms: algorithms.to_vec(),
            axis: SweepAxis::VaryMFixedMu,
            values: values.to_vec(),
            mu: Some(mu),
            left: None,
            right: None,
            m: None,
            repetitions: DEFAULT_REPETITIONS,
            seed: 0,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            output: None,
        }
    }

    /// A mu-sweep on a fixed bipartite graph.
    pub fn vary_mu_bipartite(
        family: Family,
        algorithms: &[Algorithm],
        values: &[usize],
        left: usize,
        right: usize,
    ) -> Self {
        Self {
            axis: SweepAxis::VaryMuFixedM,
            mu: None,
            left: Some(left),
            right: Some(right),
            ..Self::vary_m(family, algorithms, values, 0)
        }
    }

    /// A mu-sweep on a fixed path.
    pub fn vary_mu_path(algorithms: &[Algorithm], values: &[usize], m: usize) -> Self {
        Self {
            axis: SweepAxis::VaryMuFixedM,
            mu: None,
            m: Some(m),
            ..Self::vary_m(Family::Path, algorithms, values, 0)
        }
    }

    pub fn from_json(s: &str) -> Result<Self, HarnessError> {
        let spec: Self = serde_json::from_str(s).map_err(|e| HarnessError::Spec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let fail = |msg: String| Err(HarnessError::Spec(msg));
        if self.algorithms.is_empty() {
            return fail("no algorithms given".into());
        }
        if self.values.is_empty() {
            return fail("no sweep values given".into());
        }
        if self.repetitions == 0 {
            return fail("repetitions must be positive".into());
        }
        match self.axis {
            SweepAxis::VaryMFixedMu => {
                if self.mu.unwrap_or(0) == 0 {
                    return fail("an m-sweep needs a positive mu".into());
                }
            }
            SweepAxis::VaryMuFixedM => {
                if self.values.contains(&0) {
                    return fail("mu values must be positive".into());
                }
                if self.family.is_bipartite() {
                    if self.left.is_none() || self.right.is_none() {
                        return fail("a bipartite mu-sweep needs left and right".into());
                    }
                } else if self.m.is_none() {
                    return fail("a path mu-sweep needs m".into());
                }
            }
        }
        Ok(())
    }

    /// The sweep points in axis order.
    pub fn points(&self) -> Result<Vec<SweepPoint>, HarnessError> {
        self.validate()?;
        let points = match self.axis {
            SweepAxis::VaryMFixedMu => {
                let mu = self.mu.expect("validated");
                self.values
                    .iter()
                    .map(|&v| match self.family.gap(mu) {
                        Some(gap) => SweepPoint::bipartite(self.family, v + gap, v, mu),
                        None => SweepPoint::path(v, mu),
                    })
                    .collect()
            }
            SweepAxis::VaryMuFixedM => self
                .values
                .iter()
                .map(|&mu| {
                    if self.family.is_bipartite() {
                        SweepPoint::bipartite(
                            self.family,
                            self.left.expect("validated"),
                            self.right.expect("validated"),
                            mu,
                        )
                    } else {
                        SweepPoint::path(self.m.expect("validated"), mu)
                    }
                })
                .collect(),
        };
        Ok(points)
    }
}
