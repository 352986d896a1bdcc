//! File formats and command-line front end for `ozawa-core`.
//!
//! * [`config`]: run configuration (flags or a TOML file), element-set and
//!   level-range notation.
//! * [`document`]: the JSON certificate schema.
//! * [`tables`]: growth tables and Følner defect curves as CSV or JSON.
//! * [`cli`]: the `ozawa` subcommands.

pub mod cli;
pub mod config;
pub mod document;
pub mod tables;

pub use config::{ElementSetSpec, LevelRange, OutputFormat, RunConfig};
pub use document::CertificateDocument;
