//! Command-line front end: job configuration, the `compute`, `check` and
//! `explain` verbs, and text, JSON and CSV rendering of reports.

pub mod config;
pub mod error;
pub mod job;
pub mod render;
pub mod report;

pub use config::{Artifact, FamilyName, FamilyParams, Format, JobConfig, PartialConfig};
pub use error::CliError;
pub use job::{check, engine_options, explain, run, CheckOptions};
pub use report::{JobReport, SCHEMA};
