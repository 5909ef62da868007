//! Command-line front end, ensembles and file formats for `eigenbound-core`.

pub mod commands;
pub mod ensemble;
pub mod error;
pub mod mmio;
pub mod report;
pub mod source;
pub mod sweep;

pub use error::{Error, Result};
