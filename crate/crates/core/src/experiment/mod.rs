//! Experiment sweeps: specification, CSV rows, resumable journal and the
//! runner used by the `marc-relay` binary.

pub mod csv;
pub mod journal;
pub mod kv;
pub mod runner;
pub mod spec;

pub use csv::CsvRow;
pub use runner::{run_experiment, RunOptions, RunSummary};
pub use spec::{validate_spec, ExperimentSpec, Figure, PartialSpec, SpecError, ValidatedSpec};
