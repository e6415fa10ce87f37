//! Command-line surface of zetaforge: invariants, verification suites,
//! the replication report and plot-ready angle data.

pub mod commands;
pub mod config;
pub mod record;
pub mod suites;
