//! Experiment runner for evolutionary diversity optimisation of matchings:
//! parameter sweeps, CSV records, per-point statistics and slope fits.

pub mod analysis;
pub mod record;
pub mod runner;
pub mod spec;

use thiserror::Error;

pub use analysis::{
    bound_violations, fit_slopes, summarize_points, theoretical_bound, FitAxis, PointSummary,
    SlopeFit,
};
pub use record::{read_records, write_records, ExperimentRecord, CSV_HEADER};
pub use runner::{
    run_experiment, run_experiment_with, worker_count, ExperimentOutcome, SkippedPoint,
};
pub use spec::{ExperimentSpec, Family, SweepAxis, SweepPoint};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] edo_core::EdoError),

    #[error("invalid experiment spec: {0}")]
    Spec(String),

    #[error("CSV schema mismatch: {0}")]
    Schema(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
