//! Front end for `milnor_symbols`: argument parsing, configuration, and
//! JSON/CSV/text rendering.

pub mod args;
pub mod commands;
pub mod config;
pub mod report;

pub use args::{Cli, Format};
pub use commands::{run, Failure};
