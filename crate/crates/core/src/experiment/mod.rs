//! Configuration-driven sweeps and their tabular output.

pub mod config;
pub mod emit;
pub mod sweep;

pub use config::{load_config, parse_config, ExperimentConfig, SweepVariable};
pub use emit::{emit, render, OutputFormat};
pub use sweep::{mc_deviation, run_optimize, run_sweep, McDeviation, SweepResult, SweepRow};
