//! Batch front-end for Casimir pressure sweeps: run description files in,
//! CSV out.

pub mod error;
pub mod run;
pub mod runspec;

pub use error::CliError;
pub use run::{compute, write_csv, Geometry, Mode, Row, CSV_HEADER};
pub use runspec::{parse_runspec, serialize, RunSpec, Sweep};
