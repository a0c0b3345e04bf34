//! Verification campaigns, the result cache, file formats and the command
//! line for m-good partitions. The algorithms live in `mgood-core`.

pub mod cache;
pub mod cli;
pub mod clock;
pub mod dto;
pub mod formats;
pub mod harness;

/// Toolkit version stamped into cache keys and reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
