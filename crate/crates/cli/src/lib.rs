//! Command-line front end for `lhvcert-core`: JSON and CSV file formats,
//! inline state specifications and the `lhvcert` subcommands.

pub mod app;
pub mod formats;
pub mod zoo;

pub use app::run;
