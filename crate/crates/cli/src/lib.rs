//! Experiment harness for the near-field secrecy toolkit.
//!
//! Loads TOML experiment configs, runs parameter sweeps over the beamforming
//! schemes in parallel, writes CSV/JSON rows and times the proposed pipeline
//! against the full optimizer.

pub mod bench;
pub mod config;
pub mod error;
pub mod experiment;
pub mod output;
pub mod scenario;

pub use bench::{bench_runtime, BenchRow};
pub use config::{ExperimentConfig, ExperimentId, Scheme, SweepAxis};
pub use error::{HarnessError, Result};
pub use experiment::{curve, run_experiment, summarize, ExperimentOutput, ResultRow, SummaryRow};
pub use output::{emit_csv, emit_json, parse_csv, read_csv, read_json};
