//! Experiment driver around `relapprox-core`: seeded point-set generation,
//! end-to-end construction runs with exact verification, baseline
//! comparisons, and machine-readable reports.
//!
//! The binary front end lives in `main.rs`; everything it does is reachable
//! through this library so tests can drive runs in-process.

pub mod config;
pub mod csvout;
pub mod generate;
pub mod runner;

pub use config::{ExperimentConfig, GeneratorKind};
pub use generate::generate_points;
pub use runner::{run, RunArtifacts, RunReport};
