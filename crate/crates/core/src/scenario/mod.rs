//! Scenario configuration, built-in initial data and file formats.

mod build;
mod config;
mod diagnostics_csv;
mod snapshot;

pub use build::{build_scenario, build_tangent, Params};
pub use config::{load_config, parse_config, Checks, ScenarioConfig, ScenarioKind, TangentConfig};
pub use diagnostics_csv::{csv_header, csv_row, DiagnosticsWriter};
pub use snapshot::{decode_snapshot, encode_snapshot, read_snapshot, write_snapshot, MAGIC, VERSION};
