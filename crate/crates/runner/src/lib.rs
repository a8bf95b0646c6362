//! Batch front end for the simulator. Reads TOML scenarios and runs their
//! parameter sweeps in parallel, deriving every run's seed from one base seed.

pub mod config;
mod execute;
mod sweep;
pub mod units;

pub use config::{parse_scenario, parse_sweep, ConfigError, ScenarioConfig, SweepAxis};
pub use execute::{
    aggregate_csv, execute, summary_rows, write_outputs, Aggregate, Campaign, RunResult, Stat, AGGREGATE_HEADER,
};
pub use sweep::{expand_sweep, Assignment, RunSpec, SweepError};
