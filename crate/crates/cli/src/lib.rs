//! Experiment harness behind the `bloomrf` command-line tool.

pub mod artifact;
pub mod bench;
pub mod model_table;
pub mod online;
pub mod record;
pub mod scatter;

pub use bench::{run_cell, run_cells, thread_budget, BenchCell, Built, FilterKind, Layout};
pub use record::{csv_header, ExperimentRecord, SCHEMA_VERSION};
