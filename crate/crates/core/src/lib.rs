//! Evolutionary diversity optimisation of maximum matchings.
//!
//! The engine evolves populations of maximum matchings on complete bipartite
//! graphs and paths towards maximal total Hamming distance, using either the
//! (mu+1)-EA_D (standard bit mutation) or the two-phase matching EA_D
//! (unmatch a random vertex subset, then greedily rematch it).
//!
//! ```
//! use edo_core::{run, seeds, Algorithm, Graph, RunConfig};
//!
//! let g = Graph::complete_bipartite(12, 5).unwrap();
//! let start = seeds::homogeneous_bipartite_population(&g, 2).unwrap();
//! let result = run(&RunConfig::new(g, Algorithm::TwoPhase, start, 7, 1_000_000)).unwrap();
//! assert!(result.reached_target);
//! assert_eq!(result.final_diversity, 10);
//! ```

pub mod diversity;
pub mod error;
pub mod evolution;
pub mod graph;
pub mod matching;
pub mod oracle;
pub mod seeds;
pub mod stats;

pub use diversity::{
    canonical_optimal_path_population, optimal_diversity, population_diversity, Population,
};
pub use error::{EdoError, Result};
pub use evolution::{run, Algorithm, Engine, RunConfig, RunResult, TargetDiversity};
pub use graph::{Graph, GraphKind, VertexId};
pub use matching::{Matching, PathProfile};

/// Power-law fit in double precision.
pub type PowerLawFit = stats::PowerLawFit<f64>;
/// Mean and sample standard deviation in double precision.
pub type SampleSummary = stats::SampleSummary<f64>;
