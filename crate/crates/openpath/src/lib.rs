//! File formats, scenario configuration, synthetic data and the end-to-end
//! prediction pipeline built on [`openpath_core`].
//!
//! The usual entry point is [`pipeline::run_pipeline`], which takes a loaded
//! [`config::ScenarioConfig`] and the two observed deviation series and
//! returns every droop, path and total with a per-value status.
//! [`report::Report`] turns that outcome into the JSON document the CLI
//! writes.

pub mod config;
pub mod error;
pub mod io;
pub mod pipeline;
pub mod report;
pub mod synthetic;

pub use config::{Overrides, ScenarioConfig};
pub use error::PipelineError;
pub use pipeline::{run_pipeline, PipelineOutcome};
pub use report::Report;

/// Crate version, echoed into every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
