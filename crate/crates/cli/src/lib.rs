//! Shared pieces of the `ramf` command-line tool: instance readers for the
//! common network formats, per-flow evaluation metrics, and the experiment
//! runner that sweeps instances x seeds x approaches into CSV/JSON tables.
//!
//! The binary in `main.rs` is a thin clap layer over these modules; they are
//! exposed as a library so integration tests can drive them directly.

pub mod experiment;
pub mod formats;
pub mod metrics;
