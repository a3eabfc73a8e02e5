//! Per-point statistics, power-law fits and theoretical bound checks.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use edo_core::stats::{loglog_slope, summarize};
use edo_core::{Algorithm, PowerLawFit, SampleSummary};
use serde::Serialize;

use crate::record::ExperimentRecord;
use crate::spec::{Family, SweepPoint};
use crate::HarnessError;

/// A run is flagged when it exceeds this multiple of its theoretical bound.
pub const BOUND_FACTOR: f64 = 100.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointSummary {
    pub family: Family,
    pub algorithm: Algorithm,
    pub left_size: usize,
    pub right_size: usize,
    pub m: usize,
    pub n: usize,
    pub mu: usize,
    pub runs: usize,
    /// Runs that stopped before reaching the target.
    pub failed: usize,
    /// Iterations over successful runs; `None` if every run failed.
    pub iterations: Option<SampleSummary>,
}

/// Mean and sample standard deviation of iterations per (point, algorithm),
/// over successful runs only.
pub fn summarize_points(records: &[ExperimentRecord]) -> Vec<PointSummary> {
    type PointKey = (Family, Algorithm, usize, usize, usize, usize);
    let mut groups: BTreeMap<PointKey, Vec<&ExperimentRecord>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.family, r.algorithm, r.m, r.left_size, r.right_size, r.mu))
            .or_default()
            .push(r);
    }
    groups
        .into_values()
        .map(|rows| {
            let ok: Vec<f64> = rows
                .iter()
                .filter(|r| r.reached_target)
                .map(|r| r.iterations as f64)
                .collect();
            let r = rows[0];
            PointSummary {
                family: r.family,
                algorithm: r.algorithm,
                left_size: r.left_size,
                right_size: r.right_size,
                m: r.m,
                n: r.n,
                mu: r.mu,
                runs: rows.len(),
                failed: rows.len() - ok.len(),
                iterations: summarize(&ok),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FitAxis {
    M,
    Mu,
}

impl fmt::Display for FitAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FitAxis::M => "m",
            FitAxis::Mu => "mu",
        })
    }
}

impl FromStr for FitAxis {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "m" => Ok(FitAxis::M),
            "mu" => Ok(FitAxis::Mu),
            _ => Err(HarnessError::Spec(format!("unknown fit axis {s:?}"))),
        }
    }
}

/// Power-law fit of mean iterations against `m` or `mu` for one group.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeFit {
    pub family: Family,
    pub algorithm: Algorithm,
    pub axis: FitAxis,
    /// The quantity held fixed: `mu` for an m-fit, `m` for a mu-fit.
    pub fixed: usize,
    pub points: usize,
    /// Points left out because every run there failed.
    pub missing_points: usize,
    pub failed_runs: usize,
    pub fit: PowerLawFit,
}

/// Fits every (family, algorithm, fixed value) group with at least two
/// points. Without an explicit axis, a family/algorithm pair whose records
/// span several `m` is fitted against `m`, otherwise against `mu`.
pub fn fit_slopes(
    records: &[ExperimentRecord],
    axis: Option<FitAxis>,
) -> Result<Vec<SlopeFit>, HarnessError> {
    let summaries = summarize_points(records);
    let mut by_pair: BTreeMap<(Family, Algorithm), Vec<&PointSummary>> = BTreeMap::new();
    for s in &summaries {
        by_pair.entry((s.family, s.algorithm)).or_default().push(s);
    }
    let mut fits = Vec::new();
    for ((family, algorithm), points) in by_pair {
        let axis = axis.unwrap_or_else(|| {
            let first = points[0].m;
            if points.iter().any(|p| p.m != first) {
                FitAxis::M
            } else {
                FitAxis::Mu
            }
        });
        let mut groups: BTreeMap<usize, Vec<&PointSummary>> = BTreeMap::new();
        for p in points {
            let fixed = match axis {
                FitAxis::M => p.mu,
                FitAxis::Mu => p.m,
            };
            groups.entry(fixed).or_default().push(p);
        }
        for (fixed, group) in groups {
            let xy: Vec<(f64, f64)> = group
                .iter()
                .filter_map(|p| {
                    let x = match axis {
                        FitAxis::M => p.m,
                        FitAxis::Mu => p.mu,
                    };
                    p.iterations.map(|s| (x as f64, s.mean))
                })
                .collect();
            if xy.len() < 2 {
                continue;
            }
            fits.push(SlopeFit {
                family,
                algorithm,
                axis,
                fixed,
                points: xy.len(),
                missing_points: group.len() - xy.len(),
                failed_runs: group.iter().map(|p| p.failed).sum(),
                fit: loglog_slope(&xy)?,
            });
        }
    }
    Ok(fits)
}

/// The proven expected-runtime bound for a configuration, without its constant.
///
/// Big gap EA_D: `mu^2 m^2 log m`; small gap EA_D: `mu^2 m^4 log m`; path
/// EA_D: `mu^3 m^3`; big gap 2P: `mu^2 n^2 log n`; small gap 2P:
/// `mu^2 m^2 log m`; path 2P: `mu^3 m^2`.
pub fn theoretical_bound(
    family: Family,
    algorithm: Algorithm,
    m: usize,
    n: usize,
    mu: usize,
) -> f64 {
    let (m, n, mu) = (m as f64, n as f64, mu as f64);
    let log = |x: f64| x.ln().max(1.0);
    match (family, algorithm) {
        (Family::BipartiteBigGap, Algorithm::EaD) => mu.powi(2) * m.powi(2) * log(m),
        (Family::BipartiteSmallGap, Algorithm::EaD) => mu.powi(2) * m.powi(4) * log(m),
        (Family::Path, Algorithm::EaD) => mu.powi(3) * m.powi(3),
        (Family::BipartiteBigGap, Algorithm::TwoPhase) => mu.powi(2) * n.powi(2) * log(n),
        (Family::BipartiteSmallGap, Algorithm::TwoPhase) => mu.powi(2) * m.powi(2) * log(m),
        (Family::Path, Algorithm::TwoPhase) => mu.powi(3) * m.powi(2),
    }
}

/// Runs whose iteration count exceeds [`BOUND_FACTOR`] times their bound.
pub fn bound_violations(records: &[ExperimentRecord]) -> Vec<&ExperimentRecord> {
    records
        .iter()
        .filter(|r| {
            r.iterations as f64
                > BOUND_FACTOR * theoretical_bound(r.family, r.algorithm, r.m, r.n, r.mu)
        })
        .collect()
}

impl PointSummary {
    pub fn point(&self) -> SweepPoint {
        if self.family.is_bipartite() {
            SweepPoint::bipartite(self.family, self.left_size, self.right_size, self.mu)
        } else {
            SweepPoint::path(self.m, self.mu)
        }
    }
}
