//! File formats, configuration, parallel drivers, experiments and the
//! command line for `scatterqual-core`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod domain_spec;
pub mod error;
pub mod experiments;
pub mod io;
pub mod manifest;
pub mod parallel;

pub use error::{AppError, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
