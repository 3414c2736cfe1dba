//! Command-line front end for `planepair-core`: body parsing, run
//! configuration, a rayon-backed [`NodeMap`](planepair_core::NodeMap) and
//! JSON, CSV and text rendering of the verification reports.

pub mod body_arg;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod parallel;

pub use body_arg::parse_body;
pub use config::{Format, RunConfig};
pub use error::{CliError, Result};
pub use parallel::Rayon;
