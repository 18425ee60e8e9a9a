//! Command-line frontend for `trace-kit-core`: the JSON input format, the
//! commands, random instance generation and the verification harness.

pub mod cli;
pub mod doc;
pub mod generate;
pub mod output;
pub mod verify;

pub use cli::{run, Cli, Outcome};
pub use doc::{InputDocument, InputError};
