//! Command-line front end for `wlc-core`: JSON run configurations in Hz,
//! CSV and JSON outputs, and exit codes that classify failures.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
