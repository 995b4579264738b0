//! Configuration, CSV persistence, benchmark sweeps and the verification
//! suite behind the command-line tool.

pub mod config;
pub mod experiment;
pub mod records;
pub mod verify;

pub use config::{ExperimentConfig, ModelKind, Variant, WORKERS_ENV};
pub use experiment::{bench, bench_to_file, run_to_file, run_variant, simulate_to_files, Dataset, RunSummary};
pub use records::{MetricRecord, METRIC_COLUMNS};
pub use verify::{CheckReport, Outcome, Scale};
