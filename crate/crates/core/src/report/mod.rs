//! Output formats and verification suites used by the command-line tool.

pub mod config;
pub mod csv;
pub mod ppm;
pub mod verify;

pub use config::{Experiment, ExperimentConfig, MapSpec, OutputKind, OutputSpec};
pub use csv::{orbit_csv, write_orbit_csv};
pub use ppm::{encode_ppm, write_ppm};
pub use verify::{run_suite, Check, Discrepancy, Suite, VerifyReport};
