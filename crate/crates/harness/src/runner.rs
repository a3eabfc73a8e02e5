//! Executes sweeps: every (point, algorithm, repetition) is an independent run.

use std::time::Instant;

use edo_core::evolution::derive_seed;
use edo_core::{run, Algorithm, RunConfig};
use rayon::prelude::*;

use crate::record::{ExperimentRecord, GENERATOR};
use crate::spec::{ExperimentSpec, Family, SweepPoint};
use crate::HarnessError;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "EDO_THREADS";

/// A point that could not be run, e.g. outside the supported parameter regime.
#[derive(Debug, Clone, PartialEq)]
pub struct SkippedPoint {
    pub point: SweepPoint,
    pub algorithm: Algorithm,
    pub reason: String,
}

#[derive(Debug, Clone, Default)]
pub struct ExperimentOutcome {
    /// In canonical order.
    pub records: Vec<ExperimentRecord>,
    pub skipped: Vec<SkippedPoint>,
}

/// Workers to use: all available cores, capped by `EDO_THREADS` if set.
pub fn worker_count() -> usize {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&t| t > 0)
        .map_or(available, |t| t.min(available))
}

/// Seed of one run, a function of the master seed and the run's coordinates only.
pub fn run_seed(master: u64, point: &SweepPoint, algorithm: Algorithm, repetition: u32) -> u64 {
    let family = Family::ALL.iter().position(|&f| f == point.family).unwrap() as u64;
    let alg = Algorithm::ALL.iter().position(|&a| a == algorithm).unwrap() as u64;
    derive_seed(
        master,
        &[
            family,
            alg,
            point.left as u64,
            point.right as u64,
            point.m as u64,
            point.mu as u64,
            repetition as u64,
        ],
    )
}

/// Runs one repetition of one point.
pub fn run_point(
    point: &SweepPoint,
    algorithm: Algorithm,
    repetition: u32,
    master_seed: u64,
    max_iterations: u64,
) -> Result<ExperimentRecord, HarnessError> {
    let g = point.graph()?;
    let seed = run_seed(master_seed, point, algorithm, repetition);
    let config = RunConfig::new(
        g,
        algorithm,
        point.initial_population()?,
        seed,
        max_iterations,
    );
    let start = Instant::now();
    let result = run(&config)?;
    let wall_time_ms = (start.elapsed().as_secs_f64() * 1e6).round() / 1e3;
    Ok(ExperimentRecord {
        family: point.family,
        left_size: point.left,
        right_size: point.right,
        m: g.m(),
        n: g.n(),
        mu: point.mu,
        algorithm,
        generator: GENERATOR.into(),
        repetition,
        seed,
        iterations: result.iterations,
        reached_target: result.reached_target,
        final_diversity: result.final_diversity,
        target_diversity: result.target_diversity,
        wall_time_ms,
    })
}

/// Runs a sweep on `workers` threads, handing each point's rows to `emit` as
/// soon as the point completes. Points are processed in canonical order, so
/// the emitted sequence does not depend on the number of workers. Points whose
/// runs fail are recorded as skipped and the sweep continues.
pub fn run_experiment_with<F>(
    spec: &ExperimentSpec,
    workers: usize,
    mut emit: F,
) -> Result<ExperimentOutcome, HarnessError>
where
    F: FnMut(&[ExperimentRecord]) -> Result<(), HarnessError>,
{
    let points = spec.points()?;
    let mut jobs: Vec<(SweepPoint, Algorithm)> = points
        .iter()
        .flat_map(|p| spec.algorithms.iter().map(move |&a| (*p, a)))
        .collect();
    jobs.sort_by_key(|(p, a)| (p.family, *a, p.m, p.left, p.right, p.mu));
    jobs.dedup();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| HarnessError::Spec(format!("cannot start workers: {e}")))?;
    let mut outcome = ExperimentOutcome::default();
    for (point, algorithm) in jobs {
        let rows: Result<Vec<ExperimentRecord>, HarnessError> = pool.install(|| {
            (0..spec.repetitions)
                .into_par_iter()
                .map(|rep| run_point(&point, algorithm, rep, spec.seed, spec.max_iterations))
                .collect()
        });
        match rows {
            Ok(rows) => {
                emit(&rows)?;
                outcome.records.extend(rows);
            }
            Err(HarnessError::Core(e)) => outcome.skipped.push(SkippedPoint {
                point,
                algorithm,
                reason: e.to_string(),
            }),
            Err(e) => return Err(e),
        }
    }
    Ok(outcome)
}

/// Runs a sweep with [`worker_count`] workers.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutcome, HarnessError> {
    run_experiment_with(spec, worker_count(), |_| Ok(()))
}
