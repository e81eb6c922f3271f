//! Std companion of `partopt-core`: file formats, experiment drivers and
//! CSV output for the `partopt` command-line tool.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod experiments;
pub mod fixtures;
pub mod formats;
pub mod output;

pub use config::{Experiment, ExperimentConfig};
