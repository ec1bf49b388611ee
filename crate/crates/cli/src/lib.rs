//! Command-line front end for the triangular-lattice quantum walk
//! simulator: config-driven, seeded, reproducible runs that emit CSV/JSON
//! data and SVG figures.

pub mod commands;
pub mod config;
pub mod error;

pub use commands::RunContext;
pub use config::{ExperimentConfig, OutputFormat};
pub use error::CliError;
