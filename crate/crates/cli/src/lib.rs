//! Batch front end for `coarsekit`: the CGK problem format, command
//! dispatch, and deterministic text, JSON, CSV and DOT output.

pub mod commands;
pub mod input;
pub mod report;

pub use commands::{run_command, CliError, Command, Export, ExportKind, Options, RunReport};
pub use input::{parse_input, parse_input_with_cap, InputError, ProblemSpec};
pub use report::Report;
