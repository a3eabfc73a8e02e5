//! CSV rows: one per (sweep point, algorithm, repetition).

use std::io::{Read, Write};

use edo_core::Algorithm;
use serde::{Deserialize, Serialize};

use crate::spec::{Family, SweepPoint};
use crate::HarnessError;

pub const CSV_HEADER: &str =
    "family,left_size,right_size,m,n,mu,algorithm,generator,repetition,seed,\
iterations,reached_target,final_diversity,target_diversity,wall_time_ms";

/// Identifier of the pseudo-random generator, written to every row.
pub const GENERATOR: &str = "chacha8";

/// Outcome of one run. Only `wall_time_ms` varies between replays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub family: Family,
    /// Zero for paths.
    pub left_size: usize,
    pub right_size: usize,
    pub m: usize,
    pub n: usize,
    pub mu: usize,
    pub algorithm: Algorithm,
    pub generator: String,
    pub repetition: u32,
    pub seed: u64,
    pub iterations: u64,
    pub reached_target: bool,
    pub final_diversity: u64,
    pub target_diversity: u64,
    /// Nondeterministic.
    pub wall_time_ms: f64,
}

impl ExperimentRecord {
    pub fn point(&self) -> SweepPoint {
        if self.family.is_bipartite() {
            SweepPoint::bipartite(self.family, self.left_size, self.right_size, self.mu)
        } else {
            SweepPoint::path(self.m, self.mu)
        }
    }

    /// Canonical row order: family, algorithm, m, sides, mu, repetition.
    pub fn sort_key(&self) -> (Family, Algorithm, usize, usize, usize, usize, u32) {
        (
            self.family,
            self.algorithm,
            self.m,
            self.left_size,
            self.right_size,
            self.mu,
            self.repetition,
        )
    }
}

pub fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().has_headers(false).from_writer(w)
}

pub fn write_header<W: Write>(w: &mut csv::Writer<W>) -> Result<(), HarnessError> {
    w.write_record(CSV_HEADER.split(','))?;
    Ok(())
}

pub fn write_records<W: Write>(w: W, records: &[ExperimentRecord]) -> Result<(), HarnessError> {
    let mut w = csv_writer(w);
    write_header(&mut w)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads rows, insisting on the exact header.
pub fn read_records<R: Read>(r: R) -> Result<Vec<ExperimentRecord>, HarnessError> {
    let mut reader = csv::Reader::from_reader(r);
    let header: Vec<&str> = reader.headers()?.iter().collect();
    if header.join(",") != CSV_HEADER {
        return Err(HarnessError::Schema(format!(
            "unexpected header {:?}",
            header.join(",")
        )));
    }
    reader
        .deserialize()
        .map(|row| row.map_err(HarnessError::from))
        .collect()
}
