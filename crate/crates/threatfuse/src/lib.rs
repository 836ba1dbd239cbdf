//! Std companion to `threatfuse-core`: scenario and region file formats,
//! detection and result CSVs, a thread-pool runner whose output does not
//! depend on the thread count, and the `threatfuse` command line.

pub mod cli;
pub mod detections;
pub mod error;
pub mod output;
pub mod region_file;
pub mod runner;
pub mod scenario_file;

pub use error::{Error, Result};
pub use runner::Runner;
pub use scenario_file::ScenarioDocument;
