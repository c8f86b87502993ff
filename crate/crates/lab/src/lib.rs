//! Experiment harness around the `treegraded` library: coloring requests,
//! property suites, brute-force oracles, seeded corpora and sweep reports.

pub mod corpus;
pub mod error;
pub mod experiment;
pub mod lemmas;
pub mod oracle;
pub mod pipeline;

pub use error::LabError;
pub use experiment::{run_experiment, ExperimentConfig, Report};

/// Seed override read from `TG_SEED`, if set and numeric.
pub fn seed_from_env() -> Option<u64> {
    std::env::var("TG_SEED").ok()?.trim().parse().ok()
}
