//! Experiment drivers behind the `cutfeec` binary: config parsing, the four
//! experiment kinds and deterministic CSV emission.

pub mod config;
pub mod csv;
pub mod experiments;

pub use config::ExperimentConfig;
pub use csv::CsvDoc;
