//! Front end for the `hyperpell` solver: expression parsing, subcommands
//! and reports.

pub mod commands;
pub mod parse;
pub mod report;

pub use commands::{run, Command, RunConfig};
pub use report::{Report, Verdict};
