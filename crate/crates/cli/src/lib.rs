//! File formats and experiment pipeline behind the `sim` command.

pub mod config_io;
pub mod csv_out;
pub mod pipeline;
pub mod presets;

pub use config_io::{config_to_json, parse_config, ConfigError};
pub use csv_out::{trace_to_csv, write_trace_csv};
pub use pipeline::{exact_reference, run_pipeline, run_preset, run_presets, RunManifest, RunOptions};
pub use presets::{find_preset, preset_names, Preset, PRESETS};
