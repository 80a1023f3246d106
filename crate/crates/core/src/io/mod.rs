//! Command configuration, the command driver and CSV/JSON export.

pub mod config;
pub mod export;
pub mod run;

pub use config::{parse_angle, parse_ratio, Command, Format, Params, RunConfig, StateKind};
pub use export::{grid_from_json, to_csv, to_json, Body, Report, Table, SCHEMA_VERSION};
pub use run::{build_state, execute, fidelity_scan, render, run, FidelityRow, RunError};
