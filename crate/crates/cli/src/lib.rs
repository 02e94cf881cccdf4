//! Command implementations behind the `streamarb` binary.
//!
//! Every command writes its human-readable output to the supplied writer so
//! the binary and the tests share one code path.

pub mod commands;
pub mod config;

pub use commands::{cmd_compare, cmd_feasibility, cmd_gen_traffic, cmd_paper_example, cmd_run, GenParams, TrafficKind};
